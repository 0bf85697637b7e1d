"""Sorting networks: validation, counting, enumeration, Edelman-Greene, drawing.

A network on ``n`` wires is a word ``s_1 ... s_N`` with ``N = n(n-1)/2`` in
which ``s_t = k`` swaps the contents of positions ``k`` and ``k + 1``.  Swaps
are applied left to right starting from the identity arrangement.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _fast
from ._rng import as_generator
from .errors import DomainError, InvariantError, ResourceError
from .tableaux import StandardTableau, make_staircase

ENUMERATE_MAX_N = 5


def n_swaps(n: int) -> int:
    return n * (n - 1) // 2


def _apply(n: int, swaps: Sequence[int]) -> list[int]:
    arr = list(range(1, n + 1))
    for k in swaps:
        if not 1 <= k <= n - 1:
            raise DomainError(f"swap {k} outside 1..{n - 1}")
        arr[k - 1], arr[k] = arr[k], arr[k - 1]
    return arr


def is_sorting_network(n: int, swaps: Sequence[int]) -> bool:
    swaps = [int(s) for s in swaps]
    for k in swaps:
        if not 1 <= k <= n - 1:
            raise DomainError(f"swap {k} outside 1..{n - 1}")
    if len(swaps) != n_swaps(n):
        return False
    return _apply(n, swaps) == list(range(n, 0, -1))


@dataclass(frozen=True)
class SortingNetwork:
    n: int
    swaps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "swaps", tuple(int(s) for s in self.swaps))
        if not is_sorting_network(self.n, self.swaps):
            raise InvariantError(f"{self.swaps} is not a sorting network on {self.n} wires")

    @property
    def N(self) -> int:
        return len(self.swaps)

    def __len__(self):
        return len(self.swaps)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "swaps": list(self.swaps)})

    @classmethod
    def from_json(cls, text: str) -> "SortingNetwork":
        data = json.loads(text)
        return cls(int(data["n"]), tuple(data["swaps"]))


def stanley_count(n: int) -> int:
    """Number of sorting networks on ``n`` wires."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    denom = 1
    for j in range(1, n):
        denom *= (2 * n - 1 - 2 * j) ** j
    return math.factorial(n_swaps(n)) // denom


def enumerate_networks(n: int) -> list[SortingNetwork]:
    """All reduced words of the reverse permutation, by inversion-increasing DFS."""
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    if n > ENUMERATE_MAX_N:
        raise ResourceError(f"enumeration limited to n <= {ENUMERATE_MAX_N}")
    total = n_swaps(n)
    out: list[tuple[int, ...]] = []
    arr = list(range(1, n + 1))
    word: list[int] = []

    def dfs():
        if len(word) == total:
            out.append(tuple(word))
            return
        for k in range(1, n):
            if arr[k - 1] < arr[k]:
                arr[k - 1], arr[k] = arr[k], arr[k - 1]
                word.append(k)
                dfs()
                word.pop()
                arr[k - 1], arr[k] = arr[k], arr[k - 1]

    dfs()
    return [SortingNetwork(n, w) for w in out]


def _staircase_array(T: StandardTableau) -> tuple[int, np.ndarray]:
    fam = T.shape.family()
    if fam is None or fam[1] is not None:
        raise DomainError(f"Edelman-Greene needs a staircase tableau, got shape {T.shape.rows}")
    n = fam[0]
    E = np.zeros((n - 1, n - 1), dtype=np.int64)
    for i, row in enumerate(T.rows):
        E[i, : len(row)] = row
    return n, E


def edelman_greene(T: StandardTableau) -> SortingNetwork:
    """Sorting network obtained by repeatedly sliding out the maximal entry."""
    n, E = _staircase_array(T)
    out = np.zeros(n_swaps(n), dtype=np.int64)
    _fast.eg_forward(E, n, len(out), out)
    return SortingNetwork(n, tuple(out))


def sample_network(n: int, seed=None, check: bool = True) -> SortingNetwork:
    """Uniform sorting network: a uniform staircase SYT pushed through Edelman-Greene."""
    rng = as_generator(seed)
    shape = make_staircase(n)
    rows = np.asarray(shape.rows, dtype=np.int64)
    mask = np.zeros((n - 1, n - 1), dtype=np.bool_)
    E, _ = _fast.hook_walk_fill(rows, rng, mask, 0)
    out = np.zeros(n_swaps(n), dtype=np.int64)
    _fast.eg_forward(E, n, len(out), out)
    if check:
        return SortingNetwork(n, tuple(out))
    net = object.__new__(SortingNetwork)
    object.__setattr__(net, "n", n)
    object.__setattr__(net, "swaps", tuple(int(s) for s in out))
    return net


def periodic_lookup(net: SortingNetwork, t: int) -> int:
    """Swap at time ``t`` of the extension with ``s_{t+N} = n - s_t``."""
    N = len(net.swaps)
    r = (t - 1) % (2 * N)
    if r < N:
        return net.swaps[r]
    return net.n - net.swaps[r - N]


class PeriodicExtension:
    """Index-arithmetic view of the two-sided periodic extension."""

    def __init__(self, base: SortingNetwork):
        self.base = base

    def __getitem__(self, t: int) -> int:
        return periodic_lookup(self.base, t)

    def window(self, start: int, stop: int) -> list[int]:
        return [periodic_lookup(self.base, t) for t in range(start, stop)]


def shift(net: SortingNetwork) -> SortingNetwork:
    return SortingNetwork(net.n, net.swaps[1:] + (net.n - net.swaps[0],))


def wire_positions(net: SortingNetwork) -> np.ndarray:
    """``pos[t, w]`` is the position of wire ``w`` (0-based) after ``t`` swaps."""
    n = net.n
    pos = np.zeros((len(net.swaps) + 1, n), dtype=np.int64)
    where = list(range(n))
    at = list(range(n))
    pos[0] = where
    for t, k in enumerate(net.swaps, start=1):
        a, b = at[k - 1], at[k]
        at[k - 1], at[k] = b, a
        where[a], where[b] = k, k - 1
        pos[t] = where
    return pos


def wiring_svg(net: SortingNetwork, dx: float = 40.0, dy: float = 30.0) -> str:
    """Wiring diagram as an SVG document; wire heights grow upward with position."""
    n, N = net.n, len(net.swaps)
    pos = wire_positions(net)
    margin = 30.0
    width = margin * 2 + dx * (N + 1)
    height = margin * 2 + dy * (n - 1)

    def y(p):
        # position 0 at the bottom
        return margin + dy * (n - 1 - p)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:g}" height="{height:g}">',
    ]
    for w in range(n):
        pts = [(margin, y(pos[0, w]))]
        for t in range(1, N + 1):
            pts.append((margin + dx * (t - 0.5), y(pos[t - 1, w])))
            pts.append((margin + dx * (t + 0.5), y(pos[t, w])))
        pts.append((width - margin, y(pos[N, w])))
        coords = " ".join(f"{a:g},{b:g}" for a, b in pts)
        parts.append(f'<polyline class="wire" data-wire="{w + 1}" fill="none" stroke="black" points="{coords}"/>')
    for t, k in enumerate(net.swaps, start=1):
        cx = margin + dx * t
        cy = (y(k - 1) + y(k)) / 2
        parts.append(f'<circle class="swap" data-t="{t}" data-k="{k}" cx="{cx:g}" cy="{cy:g}" r="3" fill="red"/>')
        parts.append(f'<text x="{cx:g}" y="{height - 5:g}" font-size="10" text-anchor="middle">{k}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
