import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special, stats

from rsnlab.ague import (
    AntisymRealMatrix,
    conditional_pit,
    corners_config,
    joint_density_unnormalized,
    level_density,
    positive_spectrum,
    sample_antisym,
    sample_antisym_batch,
    sample_corners_batch,
    sample_tfs,
    sample_tfs_batch,
    spectra_csv,
)
from rsnlab.errors import DomainError, NumericError

from .oracles import level4_chi_square, spectrum_by_charpoly


def half_normal_cdf(x):
    # |N(0, 1/2)| has distribution function erf(x)
    return special.erf(np.asarray(x))


class TestMatrices:
    def test_antisymmetric(self):
        m = sample_antisym(7, 1)
        assert np.array_equal(m.a.T, -m.a)
        assert np.all(np.diag(m.a) == 0)

    def test_entry_law(self):
        a = sample_antisym_batch(2, 100000, 3)[:, 0, 1]
        assert abs(a.var() - 0.5) < 0.01
        assert stats.kstest(np.abs(a), half_normal_cdf).statistic < 0.01

    def test_dimension(self):
        with pytest.raises(DomainError):
            sample_antisym(0)


class TestSpectrum:
    def test_two(self):
        a = np.array([[0.0, -0.7], [0.7, 0.0]])
        assert positive_spectrum(AntisymRealMatrix(2, a)) == pytest.approx([0.7])

    def test_three_has_zero(self):
        m = sample_antisym(3, 4)
        assert len(positive_spectrum(m)) == 1
        eig = np.linalg.eigvalsh(1j * m.a)
        assert np.min(np.abs(eig)) < 1e-10

    @given(st.integers(0, 2**32 - 1), st.integers(2, 9))
    @settings(max_examples=40, deadline=None)
    def test_charpoly_oracle(self, seed, dim):
        m = sample_antisym(dim, seed)
        np.testing.assert_allclose(positive_spectrum(m), spectrum_by_charpoly(m.a), rtol=1e-8, atol=1e-8)

    @given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4, 6, 8]))
    @settings(max_examples=30, deadline=None)
    def test_pairing_trace(self, seed, dim):
        m = sample_antisym(dim, seed)
        sv = positive_spectrum(m)
        assert 2 * np.sum(sv**2) == pytest.approx(np.sum(m.a**2), rel=1e-8)
        eig = np.sort(np.linalg.eigvalsh(1j * m.a))
        np.testing.assert_allclose(eig, np.sort(np.concatenate([sv, -sv])), atol=1e-10)

    def test_unpaired_input_detected(self):
        with pytest.raises(NumericError):
            positive_spectrum(np.diag([3.0, 1.0]))


class TestCorners:
    def test_interlacing_and_counts(self):
        levels = sample_corners_batch(8, 10000, 5)
        for l in range(2, 9):
            assert levels[l].shape == (10000, l // 2)
        for l in range(2, 8):
            lo = levels[l]
            up = np.hstack([levels[l + 1], np.zeros((10000, 1))])
            width = lo.shape[1]
            assert np.all(lo <= up[:, :width] + 1e-9)
            assert np.all(up[:, 1 : width + 1] <= lo + 1e-9)

    def test_single_config(self):
        cfg = corners_config(11, 8)
        assert cfg.interlaces()
        assert all(len(cfg.levels[l]) == l // 2 for l in range(2, 9))
        assert cfg.particle(4, 1) == cfg.levels[4][-1]

    def test_config_from_matrix(self):
        m = sample_antisym(6, 2)
        cfg = corners_config(m, 6)
        np.testing.assert_allclose(cfg.levels[6], positive_spectrum(m))
        with pytest.raises(DomainError):
            corners_config(m, 7)

    def test_level_two_marginal(self):
        v = sample_corners_batch(3, 100000, 8)[2][:, 0]
        assert stats.kstest(v, half_normal_cdf).statistic < 0.01

    def test_level_three_density(self):
        v = sample_corners_batch(3, 100000, 9)[3][:, 0]
        cdf = lambda x: special.erf(x) - 2 * x * np.exp(-x * x) / math.sqrt(math.pi)
        assert stats.kstest(v, cdf).statistic < 0.01
        total = np.trapezoid(level_density(3)(np.linspace(0, 10, 4001)), dx=10 / 4000)
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_conditional_uniformity(self):
        levels = sample_corners_batch(4, 100000, 12)
        p3, p2 = conditional_pit(levels[2], levels[3], levels[4])
        assert stats.kstest(p3, "uniform").statistic < 0.01
        assert stats.kstest(p2, "uniform").statistic < 0.01

    def test_level_four_chi_square(self):
        pairs = sample_corners_batch(4, 100000, 13)[4]
        assert level4_chi_square(pairs).pvalue > 1e-3

    def test_csv(self):
        levels = sample_corners_batch(4, 2, 0)
        lines = spectra_csv(levels).splitlines()
        assert lines[0] == "sample_id,level,rank,value"
        assert len(lines) == 1 + 2 * (1 + 1 + 2)


class TestSmallestValue:
    def test_positive(self):
        assert np.all(sample_tfs_batch(3, 1000, 1) > 0)
        assert sample_tfs(2, 5) > 0

    def test_k1_erf(self):
        assert stats.kstest(sample_tfs_batch(1, 100000, 2), half_normal_cdf).statistic < 0.01

    def test_domain(self):
        with pytest.raises(DomainError):
            sample_tfs_batch(0, 1)


class TestJointDensity:
    def test_examples(self):
        assert joint_density_unnormalized([0.8], 2) == pytest.approx(math.exp(-0.64))
        u1, u2 = 1.3, 0.4
        sq = (u1**2 - u2**2) ** 2 * math.exp(-(u1**2) - u2**2)
        assert joint_density_unnormalized([u1, u2], 4) == pytest.approx(sq)
        assert joint_density_unnormalized([u2, u1], 4) == pytest.approx(sq)

    def test_odd_dimension_factor(self):
        u = 0.9
        assert joint_density_unnormalized([u], 3) == pytest.approx(u * u * math.exp(-u * u))

    def test_wrong_length(self):
        with pytest.raises(DomainError):
            joint_density_unnormalized([1.0, 0.5], 3)
