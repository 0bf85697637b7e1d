import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from rsnlab.ague import sample_tfs_batch
from rsnlab.errors import DomainError, NumericError
from rsnlab.fredholm import (
    density_g,
    density_ghat,
    g_cdf,
    ghat_cdf,
    ghat_constant,
    gram,
    survival_derivative,
    survival_second_derivative,
    survival_second_derivative_exact,
    survival_tfs,
    table_csv,
    tfs_cdf,
    upper_limit,
)
from rsnlab.kernels import kernel_K


class TestGram:
    @given(st.integers(1, 5), st.floats(0, 5))
    @settings(max_examples=40, deadline=None)
    def test_between_zero_and_identity(self, k, t):
        st_ = gram(k, t)
        G = st_.G
        assert np.allclose(G, G.T, atol=1e-14)
        ev = np.linalg.eigvalsh(G)
        assert ev.min() >= -1e-12 and ev.max() <= 1 + 1e-12
        assert np.allclose(st_.complement, np.eye(k) - G, atol=1e-12)

    def test_origin(self):
        assert np.array_equal(gram(3, 0.0).G, np.zeros((3, 3)))

    def test_domain(self):
        with pytest.raises(DomainError):
            gram(0, 1.0)
        with pytest.raises(DomainError):
            gram(1, -0.1)


class TestSurvival:
    def test_erf(self):
        for t in np.linspace(0, 3, 61):
            assert abs(survival_tfs(1, t) - special.erfc(t)) < 1e-8
        assert survival_tfs(1, 0.5) == pytest.approx(0.4795, abs=1e-4)

    @pytest.mark.parametrize("k", range(1, 6))
    def test_start(self, k):
        assert survival_tfs(k, 0.0) == 1.0

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_monotone_and_tail(self, k):
        vals = [survival_tfs(k, t) for t in np.linspace(0, 6, 121)]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-4

    def test_k2_against_matrices(self):
        samples = sample_tfs_batch(2, 100000, 17)
        for t in np.arange(0.2, 1.61, 0.2):
            p = float(np.mean(samples > t))
            se = math.sqrt(p * (1 - p) / len(samples))
            assert abs(p - survival_tfs(2, t)) <= 3 * se

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_derivative_at_origin(self, k):
        assert -survival_derivative(k, 0.0) == pytest.approx(kernel_K(k, 0.0, 0.0), abs=1e-8)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_derivative_matches_differences(self, k):
        h = 1e-5
        for t in np.linspace(0.1, 2.5, 9):
            fd = (survival_tfs(k, t + h) - survival_tfs(k, t - h)) / (2 * h)
            assert survival_derivative(k, t) == pytest.approx(fd, abs=1e-6)

    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_second_derivative(self, k):
        for t in [1e-5, 0.05, 0.4, 1.1, 2.3]:
            assert survival_second_derivative(k, t) == pytest.approx(survival_second_derivative_exact(k, t), abs=1e-7)

    def test_singular_complement(self):
        with pytest.raises(NumericError):
            survival_derivative(4, 40.0)


class TestDensities:
    def test_g1_closed_form(self):
        assert density_g(1, 1.0) == pytest.approx(4 / math.e / math.sqrt(math.pi), abs=1e-7)
        for x in np.linspace(0.05, 3, 20):
            assert density_g(1, x) == pytest.approx(4 * x * x * math.exp(-x * x) / math.sqrt(math.pi), abs=1e-7)

    def test_ghat1_closed_form(self):
        assert density_ghat(1, 1.0) == pytest.approx(2 / math.e, abs=1e-7)
        for x in np.linspace(0.05, 3, 20):
            assert abs(density_ghat(1, x) - 2 * x * math.exp(-x * x)) < 1e-6

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_masses(self, k):
        hi = upper_limit(k)
        mg, _ = integrate.quad(lambda x: density_g(k, x), 1e-12, hi, limit=200)
        mh, _ = integrate.quad(lambda x: density_ghat(k, x), 1e-12, hi, limit=200)
        assert mg == pytest.approx(1.0, abs=1e-6)
        assert mh == pytest.approx(1.0, abs=1e-6)
        assert g_cdf(k, hi) == pytest.approx(1.0, abs=1e-8)
        assert ghat_cdf(k, hi) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_nonnegative_and_ratio(self, k):
        for x in np.linspace(0.02, 4, 40):
            g, gh = density_g(k, x), density_ghat(k, x)
            assert g >= -1e-8 and gh >= -1e-8
            if g > 1e-6:
                assert gh / g == pytest.approx(ghat_constant(k) / x, rel=1e-6)

    def test_cdf_consistency(self):
        for x in (0.3, 0.9, 1.7):
            val, _ = integrate.quad(lambda y: density_g(2, y), 1e-12, x)
            assert g_cdf(2, x) == pytest.approx(val, abs=1e-7)
            assert tfs_cdf(2, x) == pytest.approx(1 - survival_tfs(2, x))

    def test_domain(self):
        with pytest.raises(DomainError):
            density_g(1, 0.0)
        with pytest.raises(DomainError):
            density_ghat(1, -1.0)


def test_table():
    lines = table_csv(1, [0.0, 0.5]).splitlines()
    assert lines[0] == "t,F,g,ghat"
    t, F, g, gh = map(float, lines[2].split(","))
    assert F == pytest.approx(special.erfc(0.5), abs=1e-12)
    assert gh == pytest.approx(2 * 0.5 * math.exp(-0.25), abs=1e-6)
