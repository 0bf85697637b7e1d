"""First-swap times, spacings between swaps, and the circle identities.

The swap process ``t -> s_t`` of the periodic extension has period ``2N`` and
is rotation invariant for a uniform network.  Marking the times with
``s_t = k`` on a circle of length ``K = 2N`` gives a point process whose
waiting time ``W``, spacing around the origin and spacing seen from a
particle obey two exact difference identities, checked here over the
rationals.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _fast
from ._rng import as_generator
from .errors import DomainError, NumericError, ResourceError
from .networks import (
    ENUMERATE_MAX_N,
    SortingNetwork,
    enumerate_networks,
    n_swaps,
    periodic_lookup,
    sample_network,
)
from .tableaux import count_syt, make_staircase, make_staircase_minus


def _check_k(n: int, k: int):
    if not 1 <= k <= n - 1:
        raise DomainError(f"need 1 <= k <= n-1, got n={n}, k={k}")


def first_swap_time(net: SortingNetwork, k: int) -> int:
    _check_k(net.n, k)
    return net.swaps.index(k) + 1


def spacing_sp1(net: SortingNetwork, k: int, a: int = 0) -> int:
    """Gap ``Y - X`` between the last swap ``k`` at or before ``a`` and the next one after it."""
    _check_k(net.n, k)
    period = 2 * len(net.swaps)
    y = a + 1
    while periodic_lookup(net, y) != k:
        y += 1
    x = a
    while periodic_lookup(net, x) != k:
        x -= 1
        if a - x > period:
            raise DomainError(f"swap {k} never occurs")
    return y - x


# --- tableau reductions ------------------------------------------------------


def sample_first_swap(n: int, k: int, seed=None) -> int:
    """First occurrence time of swap ``k``, read off a single tableau entry.

    Only the corner ``(n - k, k)`` of a uniform staircase SYT is needed; the
    time equals ``N + 1`` minus that entry.
    """
    _check_k(n, k)
    rng = as_generator(seed)
    rows = np.arange(n - 1, 0, -1, dtype=np.int64)
    mask = np.zeros((n - 1, n - 1), dtype=np.bool_)
    mask[n - k - 1, k - 1] = True
    entries, _ = _fast.hook_walk_fill(rows, rng, mask, 1)
    return n_swaps(n) + 1 - int(entries[n - k - 1, k - 1])


def sample_spacing(n: int, k: int, seed=None) -> int:
    """Spacing around the origin (anchor 0) for a uniform network.

    The forward part is the first swap time read from the tableau.  The
    backward part runs inverse promotion on the same tableau, which emits
    ``s_0, s_{-1}, ...`` until swap ``k`` appears.
    """
    _check_k(n, k)
    rng = as_generator(seed)
    N = n_swaps(n)
    rows = np.arange(n - 1, 0, -1, dtype=np.int64)
    mask = np.zeros((n - 1, n - 1), dtype=np.bool_)
    E, _ = _fast.hook_walk_fill(rows, rng, mask, 0)
    y = N + 1 - int(E[n - k - 1, k - 1])
    out = np.zeros(N, dtype=np.int64)
    steps = _fast.eg_backward(E, n, N, out, k)
    if out[steps - 1] != k:
        raise NumericError("inverse promotion did not meet the swap within one period")
    return y + steps - 1


def conditional_spacing_cells(n: int, k: int) -> list[tuple[int, int]]:
    """Neighbours of the removed corner that decide the conditional spacing."""
    _check_k(n, k)
    cells = []
    if k > 1:
        cells.append((n - k, k - 1))
    if k < n - 1:
        cells.append((n - k - 1, k))
    return cells


def sample_conditional_spacing(n: int, k: int, seed=None) -> int:
    """Spacing after a swap ``k`` at the anchor, via the staircase with the
    corner ``(n - k, k)`` removed: ``N`` minus the larger neighbour entry."""
    _check_k(n, k)
    rng = as_generator(seed)
    shape = make_staircase_minus(n, k)
    cells = conditional_spacing_cells(n, k)
    rows = np.asarray(shape.rows, dtype=np.int64)
    mask = np.zeros((n - 1, n - 1), dtype=np.bool_)
    for i, j in cells:
        mask[i - 1, j - 1] = True
    entries, _ = _fast.hook_walk_fill(rows, rng, mask, len(cells))
    return n_swaps(n) - max(int(entries[i - 1, j - 1]) for i, j in cells)


# --- circle process ----------------------------------------------------------


@dataclass
class CircleProcess:
    """Configurations on ``1..K`` with weights (exact) or as an equal-weight sample."""

    K: int
    configs: list[frozenset]
    weights: list  # Fraction in exact mode, float otherwise
    exact: bool

    def is_rotation_invariant(self) -> bool:
        base = self._law()
        for r in range(1, self.K):
            rotated: dict = {}
            for cfg, w in base.items():
                key = frozenset((p - 1 + r) % self.K + 1 for p in cfg)
                rotated[key] = rotated.get(key, 0) + w
            if rotated != base:
                return False
        return True

    def _law(self) -> dict:
        law: dict = {}
        for cfg, w in zip(self.configs, self.weights):
            law[cfg] = law.get(cfg, 0) + w
        return law


def occupied_times(net: SortingNetwork, k: int) -> frozenset:
    K = 2 * len(net.swaps)
    return frozenset(t for t in range(1, K + 1) if periodic_lookup(net, t) == k)


def circle_from_networks(n: int, k: int, mode: str = "exact", samples: int = 10000, seed=None) -> CircleProcess:
    _check_k(n, k)
    K = 2 * n_swaps(n)
    if mode == "exact":
        if n > ENUMERATE_MAX_N:
            raise ResourceError(f"exact circle needs n <= {ENUMERATE_MAX_N}")
        nets = enumerate_networks(n)
        w = Fraction(1, len(nets))
        return CircleProcess(K, [occupied_times(x, k) for x in nets], [w] * len(nets), True)
    if mode == "mc":
        rng = as_generator(seed)
        cfgs = [occupied_times(sample_network(n, rng, check=False), k) for _ in range(samples)]
        return CircleProcess(K, cfgs, [1.0 / samples] * samples, False)
    raise DomainError(f"unknown mode {mode!r}")


@dataclass
class SpacingReport:
    K: int
    g: list
    f1: list
    f2: list
    rho: object
    resid1: list | None = None
    resid2: list | None = None
    exact: bool = True

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ell", "g", "f1", "f2", "resid1", "resid2"])
        r1 = self.resid1 or [""] * self.K
        r2 = self.resid2 or [""] * self.K
        for ell in range(1, self.K + 1):
            w.writerow([ell] + [_fmt(v) for v in (self.g[ell - 1], self.f1[ell - 1], self.f2[ell - 1], r1[ell - 1], r2[ell - 1])])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "K": self.K,
                "rho": _fmt(self.rho),
                "g": [_fmt(v) for v in self.g],
                "f1": [_fmt(v) for v in self.f1],
                "f2": [_fmt(v) for v in self.f2],
                "resid1": None if self.resid1 is None else [_fmt(v) for v in self.resid1],
                "resid2": None if self.resid2 is None else [_fmt(v) for v in self.resid2],
            }
        )


def _fmt(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def circle_stats(p: CircleProcess) -> SpacingReport:
    """Laws of the waiting time ``W``, the spacing around the origin, and the
    spacing seen from a particle at ``K``; plus the density ``rho``."""
    zero = Fraction(0) if p.exact else 0.0
    g = [zero] * p.K
    f1 = [zero] * p.K
    f2 = [zero] * p.K
    rho = zero
    for cfg, w in zip(p.configs, p.weights):
        if not cfg:
            raise DomainError("empty configuration on the circle")
        first, last = min(cfg), max(cfg)
        g[first - 1] += w
        # distance = one plus the number of holes in between
        f1[first + p.K - last - 1] += w
        if p.K in cfg:
            rho += w
            f2[first - 1] += w
    if rho == 0:
        raise DomainError("position K is never occupied")
    f2 = [v / rho for v in f2]
    return SpacingReport(p.K, g, f1, f2, rho, exact=p.exact)


def check_circle_relations(r: SpacingReport) -> SpacingReport:
    """Fill in residuals of ``-dg(l) * l = f1(l)`` and ``-dg(l) = rho * f2(l)``."""
    zero = r.g[0] * 0
    g_ext = list(r.g) + [zero]
    resid1, resid2 = [], []
    for ell in range(1, r.K + 1):
        dg = g_ext[ell] - g_ext[ell - 1]
        resid1.append(-dg * ell - r.f1[ell - 1])
        resid2.append(-dg - r.rho * r.f2[ell - 1])
    r.resid1, r.resid2 = resid1, resid2
    return r


# --- swap density ------------------------------------------------------------


def double_factorial(m: int) -> int:
    return math.prod(range(m, 0, -2)) if m > 0 else 1


def rho_exact(n: int, k: int) -> Fraction:
    """Probability that a given time carries swap ``k``."""
    _check_k(n, k)
    return Fraction(count_syt(make_staircase_minus(n, k)), count_syt(make_staircase(n)))


def rho_asym(n: int, k: int) -> float:
    _check_k(n, k)
    return 4.0 / (math.sqrt(math.pi) * n**1.5) * double_factorial(2 * k - 1) / double_factorial(2 * k - 2)
