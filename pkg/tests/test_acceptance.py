"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Monte-Carlo criteria assert the literal thresholds (no standard-error slack);
the bootstrap standard errors are printed alongside for context.
"""
import math
import time
from contextlib import contextmanager
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from scipy import integrate, special, stats

from rsnlab import experiments as ex
from rsnlab.ague import conditional_pit, sample_corners_batch
from rsnlab.fredholm import density_g, density_ghat, survival_tfs, upper_limit
from rsnlab.kernels import (
    conditioned_kernel,
    finite_n_diagonal_mass,
    finite_n_kernel,
    kernel_K,
    limiting_kernel,
    limiting_kernel_hermite,
    limiting_kernel_series,
)
from rsnlab.networks import edelman_greene, enumerate_networks, is_sorting_network, stanley_count
from rsnlab.spacings import check_circle_relations, circle_from_networks, circle_stats, rho_asym, rho_exact
from rsnlab.tableaux import count_syt, enumerate_syt, level_count, make_staircase

from .oracles import level4_chi_square

RESULTS: dict[int, str] = {}
SQRT_PI = math.sqrt(math.pi)


@contextmanager
def criterion(num, title, capsys):
    details: list[str] = []
    start = time.perf_counter()
    try:
        yield details
    except BaseException:
        status = "FAIL"
        raise
    else:
        status = "PASS"
    finally:
        line = f"[{status}] criterion {num:2d} {title} ({time.perf_counter() - start:.1f} s) " + "; ".join(details)
        RESULTS[num] = line
        with capsys.disabled():
            print("\n" + line)


def test_exact_counts(capsys):
    with criterion(1, "exact counts", capsys) as log:
        start = time.perf_counter()
        for n, expect in [(3, 2), (4, 16), (5, 768)]:
            vals = (stanley_count(n), len(enumerate_networks(n)), count_syt(make_staircase(n)))
            log.append(f"n={n}: {vals}")
            assert vals == (expect,) * 3
        assert time.perf_counter() - start < 10


def test_edelman_greene_bijection(capsys):
    with criterion(2, "Edelman-Greene bijection n=4", capsys) as log:
        start = time.perf_counter()
        images = [edelman_greene(T) for T in enumerate_syt(make_staircase(4))]
        assert all(is_sorting_network(4, x.swaps) for x in images)
        assert len(set(images)) == 16
        assert set(images) == set(enumerate_networks(4))
        elapsed = time.perf_counter() - start
        log.append(f"16 distinct valid images, {elapsed:.3f} s")
        assert elapsed < 1


def test_circle_identities(capsys):
    with criterion(3, "circle difference identities, n <= 5", capsys) as log:
        start = time.perf_counter()
        worst = Fraction(0)
        for n in range(2, 6):
            for k in range(1, n):
                r = check_circle_relations(circle_stats(circle_from_networks(n, k)))
                worst = max([worst] + [abs(v) for v in r.resid1 + r.resid2])
        log.append(f"max rational residual {worst}")
        assert worst == 0
        assert time.perf_counter() - start < 30


def test_swap_density(capsys):
    with criterion(4, "exact and asymptotic swap density", capsys) as log:
        direct = Fraction(sum(x.swaps[0] == 1 for x in enumerate_networks(4)), 16)
        assert rho_exact(4, 1) == direct == Fraction(5, 16)
        for k in (1, 2):
            ratio = float(rho_exact(200, k)) / rho_asym(200, k)
            log.append(f"n=200 k={k} ratio {ratio:.4f}")
            assert 0.98 <= ratio <= 1.02


def test_kernel_closed_forms(capsys):
    with criterion(5, "kernel closed forms", capsys) as log:
        grid = np.linspace(0, 3, 13)
        e1 = max(abs(kernel_K(1, u, u) - 2 / SQRT_PI * math.exp(-u * u)) for u in grid)
        e2 = max(
            abs(kernel_K(2, a, b) - ((1 - 2 * a * a) * (1 - 2 * b * b) + 2) * math.exp(-(a * a + b * b) / 2) / SQRT_PI)
            for a, b in product(grid, repeat=2)
        )
        g10 = np.linspace(0, 3, 10)
        e3 = max(abs(limiting_kernel_series(k, a, b) - limiting_kernel_hermite(k, a, b)) for k in range(1, 5) for a, b in product(g10, repeat=2))
        log.append(f"k=1 diag err {e1:.1e}, k=2 err {e2:.1e}, series vs Hermite {e3:.1e}")
        assert e1 < 1e-12 and e2 < 1e-12 and e3 < 1e-8


def test_particle_counts(capsys):
    with criterion(6, "particle-count integrals", capsys) as log:
        lim = []
        for k in (1, 2, 3):
            val = integrate.quad(lambda u: limiting_kernel(2 * k, u, 2 * k, u), 0, 12, limit=200)[0]
            lim.append(abs(val - k))
        cond = []
        for k in (2, 3):
            val = integrate.quad(lambda u: conditioned_kernel(k, 2 * k, u, 2 * k, u), 0, 12, limit=200)[0]
            cond.append(abs(val - (k - 1)))
        n = 6
        shape = make_staircase(n)
        mc = ex.sample_projected_levels(n, 6, 20000, 5)
        fin = []
        for l in (2, 4, 6):
            assert finite_n_diagonal_mass(shape, l) == level_count(n, l)
            val = integrate.quad(lambda u: finite_n_kernel(shape, l, u, l, u), 0, math.sqrt(n), limit=200)[0]
            # the kernel mass below a cut must match the MC mean count below it
            for cut in (0.5, 1.0, 1.5):
                part = integrate.quad(lambda u: finite_n_kernel(shape, l, u, l, u), 0, cut, limit=200)[0]
                below = (mc[l] < cut).sum(axis=1)
                se = below.std(ddof=1) / math.sqrt(len(below))
                fin.append(abs(part - below.mean()) / max(se, 1e-12))
            assert abs(val - level_count(n, l)) < 1e-6
        log.append(f"limiting err {max(lim):.1e}, conditioned err {max(cond):.1e}, finite n=6 max |z| {max(fin):.2f}")
        assert max(lim) < 1e-6 and max(cond) < 1e-4 and max(fin) < 3


def test_fredholm_laws(capsys):
    with criterion(7, "Fredholm determinant and spacing densities", capsys) as log:
        e_surv = max(abs(survival_tfs(1, t) - special.erfc(t)) for t in np.linspace(0, 3, 61))
        e_mass = 0.0
        for k in range(1, 5):
            hi = upper_limit(k)
            mg = integrate.quad(lambda x: density_g(k, x), 1e-12, hi, limit=200)[0]
            mh = integrate.quad(lambda x: density_ghat(k, x), 1e-12, hi, limit=200)[0]
            e_mass = max(e_mass, abs(mg - 1), abs(mh - 1))
        e_ghat = max(abs(density_ghat(1, x) - 2 * x * math.exp(-x * x)) for x in np.linspace(0.01, 4, 80))
        log.append(f"survival err {e_surv:.1e}, mass err {e_mass:.1e}, ghat_1 err {e_ghat:.1e}")
        assert e_surv < 1e-8 and e_mass < 1e-6 and e_ghat < 1e-6


@pytest.mark.slow
def test_first_swap_law(capsys):
    with criterion(8, "first-swap law at n=200", capsys) as log:
        start = time.perf_counter()
        ok = True
        for k, tol in ((1, 0.03), (2, 0.04)):
            r = ex.mc_first_swap(200, k, 20000, 42)
            ks = r.summary["ks"]
            log.append(f"k={k} KS {ks['statistic']:.4f} (se {ks['se']:.4f}, tol {tol})")
            ok &= ks["statistic"] <= tol
        trend = ex.mc_first_swap_trend()
        means = [v["mean_ks"] for v in trend.summary["by_n"].values()]
        log.append(f"mean KS n=100 {means[0]:.4f} -> n=400 {means[1]:.4f}")
        elapsed = time.perf_counter() - start
        assert ok and trend.passed and elapsed < 600


@pytest.mark.slow
def test_spacing_laws(capsys):
    with criterion(9, "spacing and conditional-spacing laws at n=200", capsys) as log:
        ok = True
        for k in (1, 2):
            a = ex.mc_spacing(200, k, 20000, 42).summary["tv"]
            b = ex.mc_conditional_spacing(200, k, 20000, 42).summary["tv"]
            log.append(f"k={k} TV {a['statistic']:.4f}/{b['statistic']:.4f}")
            ok &= a["statistic"] <= 0.05 and b["statistic"] <= 0.05
        assert ok


@pytest.mark.slow
def test_corners_convergence(capsys):
    with criterion(10, "tableau corners vs aGUE corners at n=300", capsys) as log:
        r = ex.mc_corners_vs_tableaux(300, 6, 20000, 42)
        worst = r.summary["max_ks"]
        log.append(f"max KS {worst:.4f} over {len(r.summary['ks'])} coordinates")
        assert worst <= 0.04
        assert r.summary["interlacing_tableau"] == 1.0 and r.summary["interlacing_ague"] == 1.0


def test_ague_structure(capsys):
    with criterion(11, "aGUE interlacing, conditional uniformity, level-4 density", capsys) as log:
        levels = sample_corners_batch(8, 10000, 42)
        rate = ex.interlacing_rate({l: levels[l] for l in levels})
        big = sample_corners_batch(4, 100000, 43)
        p3, p2 = conditional_pit(big[2], big[3], big[4])
        k3, k2 = stats.kstest(p3, "uniform").statistic, stats.kstest(p2, "uniform").statistic
        chi = level4_chi_square(big[4])
        log.append(f"interlacing {rate:.4f}, PIT KS {k3:.4f}/{k2:.4f}, chi-square p {chi.pvalue:.3f}")
        assert rate == 1.0 and k3 < 0.01 and k2 < 0.01 and chi.pvalue > 1e-3


def test_conditioned_kernel_probe(capsys):
    with criterion(12, "conditioned kernel on level 3", capsys) as log:
        errs = [abs(conditioned_kernel(1, 3, u, 3, u) - 2 * u * math.exp(-u * u)) for u in (0.25, 0.5, 1.0, 2.0)]
        log.append(f"max err {max(errs):.1e}")
        assert max(errs) < 1e-6
