"""Young diagrams, standard and Poissonized tableaux, and their point projections.

Cells use 1-based ``(i, j)`` coordinates (row, column) in the public API.
The rotated ``(l, m)`` system attaches to each cell of a staircase-family
shape a level ``l = n - i + j`` and a rank ``m`` counted from the outer
boundary of the staircase.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _fast
from ._rng import as_generator
from .errors import DomainError, InvariantError, ResourceError

ENUMERATE_CAP = 12


@dataclass(frozen=True)
class Shape:
    rows: tuple[int, ...]
    n_hint: int | None = field(default=None, compare=False)

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if any(r < 0 for r in rows):
            raise DomainError(f"negative row length in {rows}")
        if any(a < b for a, b in zip(rows, rows[1:])):
            raise DomainError(f"rows must be weakly decreasing, got {rows}")
        while rows and rows[-1] == 0:
            rows = rows[:-1]
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return sum(self.rows)

    @property
    def length(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> tuple[int, ...]:
        if not self.rows:
            return ()
        return tuple(sum(1 for r in self.rows if r > j) for j in range(self.rows[0]))

    def __contains__(self, cell) -> bool:
        i, j = cell
        return 1 <= i <= len(self.rows) and 1 <= j <= self.rows[i - 1]

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells in row-major order."""
        for i, r in enumerate(self.rows, start=1):
            for j in range(1, r + 1):
                yield i, j

    def corners(self) -> list[tuple[int, int]]:
        """Removable cells (no cell to the right or below)."""
        out = []
        for i, r in enumerate(self.rows, start=1):
            below = self.rows[i] if i < len(self.rows) else 0
            if r > 0 and below < r:
                out.append((i, r))
        return out

    def remove(self, cell) -> "Shape":
        i, j = cell
        if cell not in self.corners():
            raise DomainError(f"{cell} is not a removable corner of {self.rows}")
        rows = list(self.rows)
        rows[i - 1] -= 1
        return Shape(tuple(rows), self.n_hint)

    def family(self) -> tuple[int, int | None] | None:
        """``(n, None)`` for a staircase, ``(n, k)`` for a staircase minus
        the corner ``(n - k, k)``, otherwise ``None``."""
        if not self.rows:
            return None
        n = self.rows[0] + 1
        stair = tuple(range(n - 1, 0, -1))
        if self.rows == stair:
            return n, None
        for k in range(1, n):
            if self.rows == make_staircase_minus(n, k).rows:
                return n, k
        return None


def make_staircase(n: int) -> Shape:
    if n < 2:
        raise DomainError(f"staircase needs n >= 2, got {n}")
    return Shape(tuple(range(n - 1, 0, -1)), n)


def make_staircase_minus(n: int, k: int) -> Shape:
    """Staircase of size ``n`` with the outer corner ``(n - k, k)`` removed."""
    if n < 2 or not 1 <= k <= n - 1:
        raise DomainError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    rows = list(range(n - 1, 0, -1))
    rows[n - k - 1] = k - 1
    return Shape(tuple(rows), n)


def hook_length(shape: Shape, cell) -> int:
    i, j = cell
    if cell not in shape:
        raise DomainError(f"cell {cell} outside shape {shape.rows}")
    arm = shape.rows[i - 1] - j
    leg = shape.columns[j - 1] - i
    return arm + leg + 1


def count_syt(shape: Shape) -> int:
    """Number of standard Young tableaux, by the hook length formula."""
    cols = shape.columns
    denom = 1
    for i, r in enumerate(shape.rows, start=1):
        for j in range(1, r + 1):
            denom *= (r - j) + (cols[j - 1] - i) + 1
    return math.factorial(shape.size) // denom


class StandardTableau:
    """Immutable SYT; ``T[i, j]`` is the entry in 1-based cell ``(i, j)``."""

    __slots__ = ("shape", "_rows")

    def __init__(self, shape: Shape, rows):
        rows = tuple(tuple(int(v) for v in row) for row in rows)
        if tuple(len(r) for r in rows) != shape.rows:
            raise DomainError(f"row lengths {[len(r) for r in rows]} do not fit shape {shape.rows}")
        flat = sorted(v for row in rows for v in row)
        if flat != list(range(1, shape.size + 1)):
            raise InvariantError("entries are not a bijection onto 1..|shape|")
        _check_increasing(rows)
        self.shape = shape
        self._rows = rows

    @classmethod
    def from_array(cls, shape: Shape, arr) -> "StandardTableau":
        return cls(shape, [arr[i, :r] for i, r in enumerate(shape.rows)])

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def __getitem__(self, cell) -> int:
        i, j = cell
        if cell not in self.shape:
            raise DomainError(f"cell {cell} outside shape")
        return self._rows[i - 1][j - 1]

    def at(self, n: int, l: int, m: int) -> int:
        """Entry at rotated coordinate ``(l, m)`` of a staircase-family shape."""
        return self[unrotate_coord(n, l, m)]

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.shape.length, self.shape.rows[0] if self.shape.rows else 0), dtype=np.int64)
        for i, row in enumerate(self._rows):
            out[i, : len(row)] = row
        return out

    def to_json(self) -> str:
        entries = [[i, j, self[i, j]] for i, j in self.shape.cells()]
        return json.dumps({"shape": list(self.shape.rows), "entries": entries})

    @classmethod
    def from_json(cls, text: str) -> "StandardTableau":
        data = json.loads(text)
        shape = Shape(tuple(data["shape"]))
        rows = [[0] * r for r in shape.rows]
        for i, j, v in data["entries"]:
            rows[i - 1][j - 1] = v
        return cls(shape, rows)

    def __eq__(self, other):
        return isinstance(other, StandardTableau) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        return f"StandardTableau({list(map(list, self._rows))})"


class PoissonizedTableau:
    """Tableau filled with distinct reals in (0, 1), increasing along rows and columns."""

    __slots__ = ("shape", "_rows")

    def __init__(self, shape: Shape, rows):
        rows = tuple(tuple(float(v) for v in row) for row in rows)
        if tuple(len(r) for r in rows) != shape.rows:
            raise DomainError("row lengths do not fit shape")
        flat = [v for row in rows for v in row]
        if any(not 0.0 < v < 1.0 for v in flat):
            raise DomainError("entries must lie in (0, 1)")
        if len(set(flat)) != len(flat):
            raise InvariantError("tied entries in a Poissonized tableau")
        _check_increasing(rows)
        self.shape = shape
        self._rows = rows

    @property
    def rows(self):
        return self._rows

    def __getitem__(self, cell) -> float:
        i, j = cell
        if cell not in self.shape:
            raise DomainError(f"cell {cell} outside shape")
        return self._rows[i - 1][j - 1]

    def to_json(self) -> str:
        entries = [[i, j, self[i, j]] for i, j in self.shape.cells()]
        return json.dumps({"shape": list(self.shape.rows), "entries": entries})


def _check_increasing(rows):
    for i, row in enumerate(rows):
        for j in range(1, len(row)):
            if not row[j - 1] < row[j]:
                raise InvariantError(f"row {i + 1} not strictly increasing at column {j + 1}")
        if i > 0:
            for j, v in enumerate(row):
                if not rows[i - 1][j] < v:
                    raise InvariantError(f"column {j + 1} not strictly increasing at row {i + 1}")


def enumerate_syt(shape: Shape, cap: int = ENUMERATE_CAP) -> list[StandardTableau]:
    """All SYT of ``shape``, built by placing the largest entry in each corner."""
    if shape.size > cap:
        raise ResourceError(f"|shape| = {shape.size} exceeds enumeration cap {cap}")

    def rec(sh: Shape):
        if sh.size == 0:
            yield [[] for _ in shape.rows]
            return
        for corner in sh.corners():
            for partial in rec(sh.remove(corner)):
                partial[corner[0] - 1].append(sh.size)
                yield partial
                partial[corner[0] - 1].pop()

    return [StandardTableau(shape, [list(r) for r in rows]) for rows in rec(shape)]


def _targets_mask(shape: Shape, cells=()) -> tuple[np.ndarray, int]:
    mask = np.zeros((max(shape.length, 1), max(shape.rows[0] if shape.rows else 1, 1)), dtype=np.bool_)
    for i, j in cells:
        mask[i - 1, j - 1] = True
    return mask, int(mask.sum())


def sample_syt(shape: Shape, seed=None) -> StandardTableau:
    """Uniform SYT via the Greene-Nijenhuis-Wilf hook walk."""
    rng = as_generator(seed)
    if shape.size == 0:
        return StandardTableau(shape, [])
    rows = np.asarray(shape.rows, dtype=np.int64)
    mask, _ = _targets_mask(shape)
    entries, _ = _fast.hook_walk_fill(rows, rng, mask, 0)
    return StandardTableau.from_array(shape, entries)


def sample_top_entries(shape: Shape, cells, seed=None) -> dict[tuple[int, int], int]:
    """Entries of a uniform SYT at ``cells`` only.

    The hook walk fills values from ``|shape|`` downward, so it can stop as
    soon as every requested cell holds a value.  This is much cheaper when
    the cells sit near the outer boundary.
    """
    rng = as_generator(seed)
    cells = list(cells)
    for c in cells:
        if c not in shape:
            raise DomainError(f"cell {c} outside shape")
    mask, count = _targets_mask(shape, cells)
    entries, _ = _fast.hook_walk_fill(np.asarray(shape.rows, dtype=np.int64), rng, mask, count)
    return {c: int(entries[c[0] - 1, c[1] - 1]) for c in cells}


@dataclass(frozen=True)
class RotatedCoord:
    l: int
    m: int


def rotate_coord(n: int, i: int, j: int) -> RotatedCoord:
    if i < 1 or j < 1 or i + j > n:
        raise DomainError(f"cell ({i},{j}) outside the staircase of size {n}")
    d = n - i - j
    m = d // 2 + 1 if d % 2 == 0 else (d + 1) // 2
    return RotatedCoord(n - i + j, m)


def level_count(n: int, l: int) -> int:
    """Cells of the staircase of size ``n`` on level ``l``."""
    return min(l, 2 * n - l) // 2


def unrotate_coord(n: int, l: int, m: int) -> tuple[int, int]:
    if not 2 <= l <= 2 * n - 2 or not 1 <= m <= level_count(n, l):
        raise DomainError(f"(l,m)=({l},{m}) outside the staircase of size {n}")
    # d = n - i - j has the parity of l, since l - d = 2j
    d = 2 * (m - 1) if l % 2 == 0 else 2 * m - 1
    return (2 * n - d - l) // 2, (l - d) // 2


def syt_to_pyt(T: StandardTableau, seed=None) -> PoissonizedTableau:
    """Replace entry ``v`` by the ``v``-th order statistic of ``|shape|`` uniforms."""
    rng = as_generator(seed)
    u = np.sort(rng.random(T.shape.size))
    return PoissonizedTableau(T.shape, [[u[v - 1] for v in row] for row in T.rows])


def pyt_to_syt(P: PoissonizedTableau) -> StandardTableau:
    """Rank the entries: the ``k``-th largest real becomes ``|shape| + 1 - k``."""
    flat = sorted(v for row in P.rows for v in row)
    rank = {v: r for r, v in enumerate(flat, start=1)}
    return StandardTableau(P.shape, [[rank[v] for v in row] for row in P.rows])


class PointConfig:
    """Particles on levels ``l >= 2``; ``levels[l]`` is sorted ascending."""

    def __init__(self, levels: dict[int, np.ndarray], n: int | None = None):
        # with n given, levels past n shrink upwards and interlace the other way round
        self.n = n
        self.levels = {int(l): np.sort(np.asarray(v, dtype=float)) for l, v in levels.items()}
        for l, v in self.levels.items():
            if np.any(np.diff(v) == 0):
                raise InvariantError(f"repeated position on level {l}")

    def particles(self) -> list[tuple[int, float]]:
        return [(l, float(u)) for l in sorted(self.levels) for u in self.levels[l]]

    def interlaces(self, levels=None, tol: float = 0.0) -> bool:
        """Check ``x[l+1][j+1] <= x[l][j] <= x[l+1][j]`` with descending order
        and zero padding, for consecutive pairs within ``levels``.  Above level
        ``n`` the two levels swap roles."""
        ls = sorted(self.levels) if levels is None else sorted(levels)
        for l in ls:
            if l + 1 not in self.levels or (levels is not None and l + 1 not in ls):
                continue
            lower, upper = self.levels[l][::-1], self.levels[l + 1][::-1]
            if self.n is not None and l + 1 > self.n:
                lower, upper = upper, lower
            if not interlace_ok(lower, upper, tol):
                return False
        return True


def interlace_ok(lower_desc, upper_desc, tol: float = 0.0) -> bool:
    """Interlacing of a descending level with the descending level above it."""
    lower = np.asarray(lower_desc, dtype=float)
    upper = np.asarray(upper_desc, dtype=float)
    size = max(len(lower), len(upper)) + 1
    lo = np.zeros(size)
    up = np.zeros(size)
    lo[: len(lower)] = lower
    up[: len(upper)] = upper
    for j in range(len(lower)):
        if lo[j] > up[j] + tol or up[j + 1] > lo[j] + tol:
            return False
    return True


def project_points(P: PoissonizedTableau, n: int) -> PointConfig:
    """Particle at ``(l, sqrt(n) * (1 - P(l, m)))`` for every cell."""
    fam = P.shape.family()
    if fam is None or fam[0] != n:
        raise DomainError("projection needs a staircase or staircase-minus-corner shape of size n")
    levels: dict[int, list[float]] = {}
    root = math.sqrt(n)
    for i, j in P.shape.cells():
        l = rotate_coord(n, i, j).l
        levels.setdefault(l, []).append(root * (1.0 - P[i, j]))
    return PointConfig({l: np.array(v) for l, v in levels.items()}, n)
