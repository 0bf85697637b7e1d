"""Seeded Monte-Carlo campaigns and exact small-``n`` identity checks.

Every stochastic run is split into fixed-size chunks, each with its own
child stream of the run seed, so the output does not depend on how many
worker threads are used.  Statistics come with a bootstrap standard error;
a run passes when ``statistic <= tolerance + 3 * se``.
"""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import _fast, ague, fredholm, stats
from ._rng import chunk_generators
from .networks import edelman_greene, enumerate_networks, n_swaps, shift, stanley_count
from .spacings import (
    check_circle_relations,
    circle_from_networks,
    circle_stats,
    conditional_spacing_cells,
    rho_exact,
)
from .tableaux import count_syt, enumerate_syt, make_staircase, make_staircase_minus, unrotate_coord

CHUNK = 500

# calibrated finite-n tolerances; the limit laws come with no convergence rates
TOL_FIRST_SWAP = {1: 0.03, 2: 0.04}
TOL_SPACING_TV = 0.05
TOL_CONDITIONAL_KS = 0.03
TOL_CORNERS_KS = 0.04


@dataclass
class RunManifest:
    experiment: str
    n: int | None = None
    k: int | None = None
    samples: int | None = None
    seed: int | None = None
    scaling: float | None = None
    tolerance: float | None = None
    params: dict = field(default_factory=dict)
    created: str = field(default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat())

    def content_hash(self) -> str:
        d = asdict(self)
        d.pop("created")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    def as_dict(self) -> dict:
        d = asdict(self)
        d["hash"] = self.content_hash()
        return d


@dataclass
class ExperimentResult:
    manifest: RunManifest
    summary: dict
    passed: bool
    samples: dict = field(default_factory=dict)

    def write(self, outdir, with_samples: bool = False) -> Path:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "manifest.json").write_text(json.dumps(self.manifest.as_dict(), indent=2, sort_keys=True) + "\n")
        body = {"passed": self.passed, **self.summary}
        (out / "summary.json").write_text(json.dumps(body, indent=2, sort_keys=True, default=float) + "\n")
        if with_samples and self.samples:
            with open(out / "samples.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["series", "index", "value"])
                for name, arr in self.samples.items():
                    for i, v in enumerate(np.asarray(arr).reshape(-1)):
                        w.writerow([name, i, repr(float(v))])
        return out


def scale(n: int) -> float:
    """Time scale ``n^(3/2) / 2`` of the first-swap and spacing limits."""
    return n**1.5 / 2


def _run_chunks(fn, seed, total: int, jobs: int = 1) -> np.ndarray:
    chunks = chunk_generators(seed, total, CHUNK)
    if jobs <= 1:
        parts = [fn(size, rng) for size, rng in chunks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda c: fn(*c), chunks))
    return np.concatenate(parts)


def _stair_rows(shape) -> np.ndarray:
    return np.asarray(shape.rows, dtype=np.int64)


# --- samplers ---------------------------------------------------------------


def sample_first_swap_times(n: int, k: int, samples: int, seed, jobs: int = 1) -> np.ndarray:
    rows = _stair_rows(make_staircase(n))
    ci, cj = np.array([n - k - 1]), np.array([k - 1])
    N = n_swaps(n)
    return _run_chunks(lambda size, rng: N + 1 - _fast.top_entries_batch(rows, rng, ci, cj, size)[:, 0], seed, samples, jobs)


def sample_spacings(n: int, k: int, samples: int, seed, jobs: int = 1) -> np.ndarray:
    return _run_chunks(lambda size, rng: _fast.spacing_batch(n, k, rng, size), seed, samples, jobs)


def sample_conditional_spacings(n: int, k: int, samples: int, seed, jobs: int = 1) -> np.ndarray:
    rows = _stair_rows(make_staircase_minus(n, k))
    cells = conditional_spacing_cells(n, k)
    ci = np.array([i - 1 for i, _ in cells])
    cj = np.array([j - 1 for _, j in cells])
    N = n_swaps(n)
    return _run_chunks(lambda size, rng: N - _fast.top_entries_batch(rows, rng, ci, cj, size).max(axis=1), seed, samples, jobs)


def corner_coordinates(L: int) -> list[tuple[int, int]]:
    return [(l, m) for l in range(2, L + 1) for m in range(1, l // 2 + 1)]


def sample_tableau_corners(n: int, L: int, samples: int, seed, jobs: int = 1, k: int | None = None) -> dict:
    """Scaled entries ``sqrt(n) (1 - T(l, m) / N)`` for all ``l <= L``."""
    shape = make_staircase(n) if k is None else make_staircase_minus(n, k)
    coords = [c for c in corner_coordinates(L) if k is None or c != (2 * k, 1)]
    cells = [unrotate_coord(n, l, m) for l, m in coords]
    ci = np.array([i - 1 for i, _ in cells])
    cj = np.array([j - 1 for _, j in cells])
    rows = _stair_rows(shape)
    raw = _run_chunks(lambda size, rng: _fast.top_entries_batch(rows, rng, ci, cj, size), seed, samples, jobs)
    N = n_swaps(n)
    scaled = math.sqrt(n) * (1.0 - raw / N)
    return {c: scaled[:, idx] for idx, c in enumerate(coords)}


def sample_projected_levels(n: int, L: int, samples: int, seed, jobs: int = 1) -> dict:
    """Poissonized projections ``sqrt(n) (1 - P(l, m))`` on levels ``2..L``.

    Tableau entries come from the partial hook walk; the Poissonized values
    are the matching order statistics of ``N`` fresh uniforms per sample.
    ``out[l]`` has shape ``(samples, level_count(n, l))``.
    """
    coords = corner_coordinates(L)
    cells = [unrotate_coord(n, l, m) for l, m in coords]
    ci = np.array([i - 1 for i, _ in cells])
    cj = np.array([j - 1 for _, j in cells])
    rows = _stair_rows(make_staircase(n))
    N = n_swaps(n)

    def chunk(size, rng):
        entries = _fast.top_entries_batch(rows, rng, ci, cj, size)
        order = np.sort(rng.random((size, N)), axis=1)
        return np.take_along_axis(order, entries - 1, axis=1)

    P = _run_chunks(chunk, seed, samples, jobs)
    out = {}
    for l in range(2, L + 1):
        idx = [c for c, (ll, _) in enumerate(coords) if ll == l]
        out[l] = math.sqrt(n) * (1.0 - P[:, idx])
    return out


def sample_ague_corners(L: int, samples: int, seed) -> dict:
    """``m``-th smallest positive eigenvalue of the ``l``-th corner, for all ``l <= L``."""
    levels = ague.sample_corners_batch(L, samples, seed)
    return {(l, m): levels[l][:, l // 2 - m] for l, m in corner_coordinates(L)}


def _levels_from_coords(coords: dict, L: int) -> dict:
    # descending arrays per level, for interlacing checks
    out = {}
    for l in range(2, L + 1):
        ms = sorted(m for (ll, m) in coords if ll == l)
        out[l] = np.stack([coords[(l, m)] for m in reversed(ms)], axis=1)
    return out


def interlacing_rate(levels: dict, tol: float = 1e-9) -> float:
    """Fraction of samples whose consecutive levels interlace (descending, zero-padded)."""
    ls = sorted(levels)
    count = len(levels[ls[0]])
    ok = np.ones(count, dtype=bool)
    for l in ls:
        if l + 1 not in levels:
            continue
        lo, up = levels[l], levels[l + 1]
        width = max(lo.shape[1], up.shape[1]) + 1
        lo_p = np.zeros((count, width))
        up_p = np.zeros((count, width))
        lo_p[:, : lo.shape[1]] = lo
        up_p[:, : up.shape[1]] = up
        j = lo.shape[1]
        ok &= np.all(lo_p[:, :j] <= up_p[:, :j] + tol, axis=1)
        ok &= np.all(up_p[:, 1 : j + 1] <= lo_p[:, :j] + tol, axis=1)
    return float(ok.mean())


# --- limit-law helpers --------------------------------------------------------


def tfs_cdf_interp(k: int):
    return stats.grid_cdf(lambda t: fredholm.tfs_cdf(k, t), fredholm.upper_limit(k, 1e-15))


def _bins(k: int, which: str, nbins: int = 30):
    cdf = (lambda x: fredholm.g_cdf(k, x)) if which == "g" else (lambda x: fredholm.ghat_cdf(k, x))
    # bins over [0, 0.999-quantile]; the remaining mass joins the last bin
    hi = 0.5
    while cdf(hi) < 0.999:
        hi += 0.1
    edges = np.linspace(0.0, hi, nbins + 1)
    return edges, stats.bin_masses(cdf, edges)


# --- experiments --------------------------------------------------------------


def mc_first_swap(n: int, k: int, samples: int = 20000, seed: int = 0, tolerance: float | None = None, jobs: int = 1) -> ExperimentResult:
    tol = TOL_FIRST_SWAP.get(k, 0.04) if tolerance is None else tolerance
    times = sample_first_swap_times(n, k, samples, seed, jobs)
    scaled = times / scale(n)
    fit = stats.ks_fit(scaled, tfs_cdf_interp(k), tol, seed=seed)
    man = RunManifest("first-swap", n, k, samples, seed, scale(n), tol)
    summary = {"ks": fit.as_dict(), "mean_scaled": float(scaled.mean())}
    return ExperimentResult(man, summary, fit.passed, {"scaled_first_swap": scaled})


def mc_first_swap_trend(ns=(100, 400), k: int = 1, samples: int = 20000, seeds=range(5), jobs: int = 1) -> ExperimentResult:
    """Mean KS distance over several seeds for each ``n``; passes if it decreases."""
    cdf = tfs_cdf_interp(k)
    table = {}
    for n in ns:
        ks = [stats.ks_distance(sample_first_swap_times(n, k, samples, s, jobs) / scale(n), cdf) for s in seeds]
        table[n] = {"mean_ks": float(np.mean(ks)), "per_seed": ks}
    means = [table[n]["mean_ks"] for n in ns]
    passed = all(a >= b for a, b in zip(means, means[1:]))
    man = RunManifest("first-swap-trend", None, k, samples, None, None, None, {"ns": list(ns), "seeds": list(seeds)})
    return ExperimentResult(man, {"by_n": {str(n): v for n, v in table.items()}}, passed)


def mc_spacing(n: int, k: int, samples: int = 20000, seed: int = 0, tolerance: float = TOL_SPACING_TV, jobs: int = 1) -> ExperimentResult:
    sp = sample_spacings(n, k, samples, seed, jobs) / scale(n)
    edges, masses = _bins(k, "g")
    fit = stats.tv_fit(sp, edges, masses, tolerance, seed=seed)
    mean, se = stats.mean_with_se(sp)
    # the mean of g_k is twice the mean of T_FS(k), i.e. 2 * int F
    limit_mean = 2 * _integral_survival(k)
    summary = {"tv": fit.as_dict(), "mean_scaled": mean, "mean_se": se, "limit_mean": limit_mean}
    man = RunManifest("spacing", n, k, samples, seed, scale(n), tolerance)
    return ExperimentResult(man, summary, fit.passed, {"scaled_spacing": sp})


def _integral_survival(k: int) -> float:
    from scipy.integrate import quad

    return quad(lambda t: fredholm.survival_tfs(k, t), 0, fredholm.upper_limit(k), limit=200)[0]


def mc_conditional_spacing(n: int, k: int, samples: int = 20000, seed: int = 0, tolerance: float = TOL_SPACING_TV, ks_tolerance: float = TOL_CONDITIONAL_KS, jobs: int = 1) -> ExperimentResult:
    sp = sample_conditional_spacings(n, k, samples, seed, jobs) / scale(n)
    edges, masses = _bins(k, "ghat")
    fit = stats.tv_fit(sp, edges, masses, tolerance, seed=seed)
    summary = {"tv": fit.as_dict(), "histogram_mass": float(np.histogram(sp, bins=edges)[0].sum() + (sp > edges[-1]).sum()) / len(sp)}
    passed = fit.passed
    if k == 1:
        ks = stats.ks_fit(sp, lambda x: 1.0 - np.exp(-np.asarray(x) ** 2), ks_tolerance, seed=seed)
        summary["ks_rayleigh"] = ks.as_dict()
        passed = passed and ks.passed
    man = RunManifest("conditional-spacing", n, k, samples, seed, scale(n), tolerance, {"ks_tolerance": ks_tolerance})
    return ExperimentResult(man, summary, passed, {"scaled_conditional_spacing": sp})


def mc_corners_vs_tableaux(n: int = 300, L: int = 6, samples: int = 20000, seed: int = 0, tolerance: float = TOL_CORNERS_KS, jobs: int = 1) -> ExperimentResult:
    ss = np.random.SeedSequence(seed)
    s_tab, s_mat = ss.spawn(2)
    tab = sample_tableau_corners(n, L, samples, s_tab, jobs)
    mat = sample_ague_corners(L, samples, np.random.default_rng(s_mat))
    table = {}
    for c in corner_coordinates(L):
        table[f"{c[0]},{c[1]}"] = stats.ks_two_sample(tab[c], mat[c])
    worst = max(table.values())
    # two-sample KS standard error under the null, roughly sqrt(2/M)*0.87/sqrt(2)
    se = 0.87 * math.sqrt(2.0 / samples) / 2
    inter_tab = interlacing_rate(_levels_from_coords(tab, L), tol=0.0)
    inter_mat = interlacing_rate(_levels_from_coords(mat, L))
    passed = worst <= tolerance + 3 * se and inter_tab == 1.0 and inter_mat == 1.0
    summary = {"ks": table, "max_ks": worst, "se": se, "interlacing_tableau": inter_tab, "interlacing_ague": inter_mat}
    man = RunManifest("corners", n, None, samples, seed, math.sqrt(n), tolerance, {"L": L})
    return ExperimentResult(man, summary, passed)


def probe_conditioned_corners(n: int, k: int, L: int, samples: int = 5000, seed: int = 0, window: float = 0.05) -> dict:
    """Exploratory: compare the conditioned tableau corners with aGUE corners
    whose smallest positive value on level ``2k`` is below ``window``.

    Returns per-coordinate two-sample KS distances; no threshold is implied.
    """
    ss = np.random.SeedSequence(seed)
    s_tab, s_mat = ss.spawn(2)
    tab = sample_tableau_corners(n, L, samples, s_tab, k=k)
    rng = np.random.default_rng(s_mat)
    kept: dict = {}
    need = samples
    while need > 0:
        batch = sample_ague_corners(L, 20000, rng)
        keep = batch[(2 * k, 1)] < window
        for c, v in batch.items():
            kept.setdefault(c, []).append(v[keep])
        need -= int(keep.sum())
    mat = {c: np.concatenate(v)[:samples] for c, v in kept.items()}
    return {f"{l},{m}": stats.ks_two_sample(tab[(l, m)], mat[(l, m)]) for (l, m) in tab}


def exact_suite(n: int) -> ExperimentResult:
    """Zero-tolerance identities for a small ``n``."""
    checks: dict = {}
    failures: dict = {}
    nets = enumerate_networks(n)
    stair = make_staircase(n)
    counts = (stanley_count(n), len(nets), count_syt(stair))
    checks["counts_agree"] = len(set(counts)) == 1
    if not checks["counts_agree"]:
        failures["counts"] = counts
    tabs = enumerate_syt(stair)
    images = [edelman_greene(T) for T in tabs]
    checks["edelman_greene_bijective"] = len(set(images)) == len(tabs) and set(images) == set(nets)
    net_set = set(nets)
    period = 2 * n_swaps(n)
    shift_ok = True
    for net in nets:
        cur = net
        for _ in range(period):
            cur = shift(cur)
            if cur not in net_set:
                shift_ok = False
                failures["shift_leaves_set"] = cur.to_json()
                break
        if cur != net:
            shift_ok = False
            failures["shift_not_periodic"] = net.to_json()
        if not shift_ok:
            break
    checks["shift_closure"] = shift_ok
    for k in range(1, n):
        proc = circle_from_networks(n, k, "exact")
        rep = check_circle_relations(circle_stats(proc))
        ok = all(r == 0 for r in rep.resid1) and all(r == 0 for r in rep.resid2)
        checks[f"circle_relations_k{k}"] = ok
        if not ok:
            failures[f"circle_k{k}"] = json.loads(rep.to_json())
        checks[f"rotation_invariant_k{k}"] = proc.is_rotation_invariant()
        checks[f"rho_matches_counts_k{k}"] = rep.rho == rho_exact(n, k)
        if k == 1 and n == 3:
            checks["rho_n3_half"] = rep.rho == rho_exact(3, 1) == 0.5
    man = RunManifest("exact", n, None, None, None, None, 0.0)
    passed = all(checks.values())
    return ExperimentResult(man, {"checks": checks, "failures": failures}, passed)
