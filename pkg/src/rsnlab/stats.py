"""Goodness-of-fit helpers: KS and binned total variation, with bootstrap errors."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy import interpolate, stats

from ._rng import as_generator


@dataclass
class FitResult:
    statistic: float
    se: float
    samples: int
    tolerance: float | None = None

    @property
    def passed(self) -> bool:
        """Statistic within tolerance plus three bootstrap standard errors."""
        return self.tolerance is None or self.statistic <= self.tolerance + 3 * self.se

    @property
    def strict(self) -> bool:
        return self.tolerance is None or self.statistic <= self.tolerance

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def grid_cdf(fn, hi: float, points: int = 401):
    """Monotone cubic interpolant of a scalar distribution function on ``[0, hi]``;
    clamped to 0 below and to ``fn(hi)`` above."""
    xs = np.linspace(0.0, hi, points)
    ys = np.array([fn(float(x)) for x in xs])
    ys = np.maximum.accumulate(ys)
    spline = interpolate.PchipInterpolator(xs, ys)

    def cdf(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0, 0.0, np.where(x >= hi, ys[-1], spline(np.clip(x, 0, hi))))

    return cdf


def ks_distance(samples, cdf) -> float:
    return float(stats.kstest(np.asarray(samples, dtype=float), cdf).statistic)


def bootstrap_se(samples, statistic, reps: int = 200, seed=0) -> float:
    rng = as_generator(seed)
    samples = np.asarray(samples)
    vals = [statistic(samples[rng.integers(0, len(samples), len(samples))]) for _ in range(reps)]
    return float(np.std(vals, ddof=1))


def ks_fit(samples, cdf, tolerance=None, reps: int = 200, seed=0) -> FitResult:
    stat = ks_distance(samples, cdf)
    se = bootstrap_se(samples, lambda s: ks_distance(s, cdf), reps, seed)
    return FitResult(stat, se, len(samples), tolerance)


def ks_two_sample(a, b) -> float:
    return float(stats.ks_2samp(np.asarray(a), np.asarray(b)).statistic)


def bin_masses(cdf, edges) -> np.ndarray:
    """Theoretical mass per bin; everything above the last edge joins the last bin."""
    F = np.array([cdf(float(e)) for e in edges])
    masses = np.diff(F)
    masses[-1] += 1.0 - F[-1]
    masses[0] += F[0]
    return masses


def binned_tv(samples, edges, masses) -> float:
    samples = np.asarray(samples, dtype=float)
    idx = np.clip(np.searchsorted(edges, samples, side="right") - 1, 0, len(masses) - 1)
    emp = np.bincount(idx, minlength=len(masses)) / len(samples)
    return float(0.5 * np.abs(emp - masses).sum())


def tv_fit(samples, edges, masses, tolerance=None, reps: int = 200, seed=0) -> FitResult:
    stat = binned_tv(samples, edges, masses)
    se = bootstrap_se(samples, lambda s: binned_tv(s, edges, masses), reps, seed)
    return FitResult(stat, se, len(samples), tolerance)


def mean_with_se(samples) -> tuple[float, float]:
    samples = np.asarray(samples, dtype=float)
    return float(samples.mean()), float(samples.std(ddof=1) / np.sqrt(len(samples)))
