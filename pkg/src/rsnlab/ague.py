"""Anti-symmetric Gaussian matrices and the spectra of their nested corners.

A Hermitian matrix ``i * a`` with real anti-symmetric ``a`` has eigenvalues
in pairs ``+-sigma`` where ``sigma`` runs over the singular values of ``a``
(each appearing twice), plus a forced zero in odd dimension.  Everything is
computed from ``a`` in real arithmetic.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._rng import as_generator
from .errors import DomainError, NumericError
from .tableaux import interlace_ok

PAIR_RTOL = 1e-6
PAIR_ATOL = 1e-10


@dataclass(frozen=True)
class AntisymRealMatrix:
    dim: int
    a: np.ndarray


def antisym_from_gaussian(Y) -> AntisymRealMatrix:
    Y = np.asarray(Y, dtype=float)
    a = (Y - Y.T) / 2.0
    return AntisymRealMatrix(Y.shape[0], a)


def sample_antisym(dim: int, seed=None) -> AntisymRealMatrix:
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    rng = as_generator(seed)
    return antisym_from_gaussian(rng.standard_normal((dim, dim)))


def sample_antisym_batch(dim: int, count: int, seed=None) -> np.ndarray:
    """``count`` stacked anti-symmetric matrices, shape ``(count, dim, dim)``."""
    rng = as_generator(seed)
    Y = rng.standard_normal((count, dim, dim))
    return (Y - np.swapaxes(Y, 1, 2)) / 2.0


def _paired_values(sv: np.ndarray, check: bool) -> np.ndarray:
    # sv sorted descending along the last axis; pairs sit at (0,1), (2,3), ...
    half = sv.shape[-1] // 2
    first = sv[..., 0 : 2 * half : 2]
    if check:
        second = sv[..., 1 : 2 * half : 2]
        gap = np.abs(first - second)
        if np.any(gap > PAIR_ATOL + PAIR_RTOL * first):
            raise NumericError(f"singular values not paired, max gap {gap.max():.3e}")
    return first


def positive_spectrum(m: AntisymRealMatrix | np.ndarray, check: bool = True) -> np.ndarray:
    """The ``floor(dim/2)`` positive eigenvalues of ``i * a``, descending.

    Works on a single matrix or a stack of matrices along the leading axes.
    """
    a = m.a if isinstance(m, AntisymRealMatrix) else np.asarray(m, dtype=float)
    try:
        sv = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"singular value decomposition failed: {exc}") from exc
    return _paired_values(sv, check)


@dataclass
class CornersConfig:
    """``levels[l]`` holds the positive spectrum of the ``l x l`` corner, descending."""

    levels: dict

    def interlaces(self, tol: float = 1e-9) -> bool:
        ls = sorted(self.levels)
        return all(interlace_ok(self.levels[l], self.levels[l + 1], tol) for l in ls if l + 1 in self.levels)

    def particle(self, l: int, m: int) -> float:
        """``m``-th smallest positive value on level ``l``."""
        vals = self.levels[l]
        return float(vals[len(vals) - m])


def corners_config(source, L: int) -> CornersConfig:
    """Corner spectra of levels ``2..L`` from one matrix (or a seed for one)."""
    if L < 2:
        raise DomainError(f"need L >= 2, got {L}")
    if isinstance(source, AntisymRealMatrix):
        a = source.a
    elif isinstance(source, np.ndarray) and source.ndim == 2:
        a = antisym_from_gaussian(source).a
    else:
        a = sample_antisym(L, source).a
    if a.shape[0] < L:
        raise DomainError(f"matrix of size {a.shape[0]} has no {L} x {L} corner")
    return CornersConfig({l: positive_spectrum(a[:l, :l]) for l in range(2, L + 1)})


def sample_corners_batch(L: int, count: int, seed=None) -> dict[int, np.ndarray]:
    """Corner spectra for ``count`` matrices; ``out[l]`` has shape ``(count, l // 2)``."""
    a = sample_antisym_batch(L, count, seed)
    return {l: positive_spectrum(a[:, :l, :l]) for l in range(2, L + 1)}


def sample_tfs(k: int, seed=None) -> float:
    """Smallest positive eigenvalue of a fresh ``2k x 2k`` matrix."""
    return float(sample_tfs_batch(k, 1, seed)[0])


def sample_tfs_batch(k: int, count: int, seed=None) -> np.ndarray:
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    return positive_spectrum(sample_antisym_batch(2 * k, count, seed))[:, -1]


def joint_density_unnormalized(values, dim: int) -> float:
    """Unnormalized joint density of the positive spectrum in dimension ``dim``.

    Squared Vandermonde in the squared values times Gaussian weights, with one
    extra factor ``lambda^2`` per value in odd dimension.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 1 or len(vals) != dim // 2:
        raise DomainError(f"expected {dim // 2} values for dimension {dim}, got {vals.shape}")
    sq = vals**2
    vdm = 1.0
    for i in range(len(sq)):
        for j in range(i + 1, len(sq)):
            vdm *= sq[i] - sq[j]
    weight = np.exp(-sq).prod()
    if dim % 2:
        weight *= sq.prod()
    return float(vdm**2 * weight)


def conditional_pit(level2, level3, level4) -> tuple[np.ndarray, np.ndarray]:
    """Probability-integral transforms that are uniform under the corners law.

    Given level 4 values ``u1 > u2``, the level 3 value ``v`` has distribution
    function ``(v^2 - u2^2) / (u1^2 - u2^2)`` on ``(u2, u1)``; given ``v``, the
    level 2 value is uniform on ``(0, v)``.
    """
    w = np.asarray(level2, dtype=float).reshape(-1)
    v = np.asarray(level3, dtype=float).reshape(-1)
    u = np.asarray(level4, dtype=float)
    u1, u2 = u[:, 0], u[:, 1]
    pit3 = (v**2 - u2**2) / (u1**2 - u2**2)
    pit2 = w / v
    return pit3, pit2


def spectra_csv(levels: dict[int, np.ndarray]) -> str:
    """Rows ``sample_id, level, rank, value`` with rank 1 the largest value."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sample_id", "level", "rank", "value"])
    count = len(next(iter(levels.values())))
    for s in range(count):
        for l in sorted(levels):
            for r, v in enumerate(levels[l][s], start=1):
                w.writerow([s, l, r, repr(float(v))])
    return buf.getvalue()


def level_density(dim: int):
    """Normalized one-dimensional densities for ``dim`` in {2, 3}."""
    if dim == 2:
        return lambda u: 2.0 / math.sqrt(math.pi) * np.exp(-np.asarray(u) ** 2)
    if dim == 3:
        return lambda u: 4.0 / math.sqrt(math.pi) * np.asarray(u) ** 2 * np.exp(-np.asarray(u) ** 2)
    raise DomainError("closed forms only for dimension 2 and 3")
