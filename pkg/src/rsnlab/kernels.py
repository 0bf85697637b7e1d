"""Correlation kernels of the edge processes.

Families:

* ``kernel_K`` - rank-``k`` Hermite kernel describing one even level of the
  corners process;
* ``corners_kernel`` - the extended kernel of the aGUE corners process;
* ``limiting_kernel_series`` / ``limiting_kernel_hermite`` - two closed forms
  of the edge-limit kernel on level ``2k``;
* ``limiting_kernel`` / ``conditioned_kernel`` / ``finite_n_kernel`` -
  double contour integrals evaluated as exact residue sums.

Residue conventions: the ``w`` residues are taken first, at integers in
``[0, x1)``.  Each leaves a one-variable ``z`` integrand whose poles are
integers ``>= 0``; the cross pole ``z = x1 - x2 - 1 - w`` coming from
``1 / (w + z + x2 - x1 + 1)`` is included exactly when it is ``>= 0``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .errors import DomainError, NumericError
from .residues import LinearProduct, RootPi, residue
from .tableaux import Shape, level_count

SQRT_PI = math.sqrt(math.pi)


# --- Hermite polynomials -----------------------------------------------------


def hermite(j: int, x):
    """Physicists' Hermite polynomial by the three-term recurrence."""
    if j < 0:
        raise DomainError(f"degree must be >= 0, got {j}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if j == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for n in range(1, j):
        h_prev, h = h, 2.0 * x * h - 2.0 * n * h_prev
    return h if h.ndim else float(h)


def hermite_norm(j: int) -> float:
    """``N_j = j! 2^(j-1) sqrt(pi)``, half the squared weighted norm of ``H_j``."""
    return math.factorial(j) * 2.0 ** (j - 1) * SQRT_PI


def hermite_functions(jmax: int, x) -> np.ndarray:
    """Orthonormal functions ``H_j(x) e^{-x^2/2} / sqrt(2^j j! sqrt(pi))`` for
    ``j = 0..jmax``, stacked along the first axis.  Stable for large ``j``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((jmax + 1,) + x.shape)
    out[0] = np.exp(-(x**2) / 2) / math.pi**0.25
    if jmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for j in range(1, jmax):
        out[j + 1] = math.sqrt(2.0 / (j + 1)) * x * out[j] - math.sqrt(j / (j + 1)) * out[j - 1]
    return out


def rodriguez_even(k: int, u: float, terms: int = 200) -> float:
    """``H_{2k}(u)`` from the power series of ``(d/du)^{2k} e^{-u^2}``."""
    with mpmath.workdps(30 + int(2 * u * u / math.log(10))):
        u = mpmath.mpf(u)
        total = mpmath.mpf(0)
        for i in range(terms):
            prod = 1
            for a in range(1, k + 1):
                prod *= 2 * i + 2 * a - 1
            total += (-1) ** (i + k) * u ** (2 * i) * prod / mpmath.factorial(i)
        return float(mpmath.exp(u * u) * 2**k * total)


# --- Hermite-form kernels ----------------------------------------------------


def kernel_K(k: int, u1, u2):
    """Symmetric rank-``k`` kernel ``2 sum_{l<k} psi_{2l}(u1) psi_{2l}(u2)``."""
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    p1 = hermite_functions(2 * k - 2, u1)[0::2]
    p2 = hermite_functions(2 * k - 2, u2)[0::2]
    val = 2.0 * (p1 * p2).sum(axis=0)
    return val if np.ndim(val) else float(val)


def limiting_kernel_hermite(k: int, u1, u2):
    """Edge-limit kernel on level ``2k`` in its Hermite form (gauge ``e^{-u2^2}``)."""
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    val = kernel_K(k, u1, u2) * np.exp((u1**2 - u2**2) / 2)
    return val if np.ndim(val) else float(val)


def corners_kernel(x: int, u: float, y: int, v: float, trunc: int = 50) -> float:
    """Extended kernel of the aGUE corners process.

    For ``x >= y`` this is a finite sum.  For ``x < y`` the series is cut
    after ``trunc + 1`` terms; its convergence is slow and it is not used by
    any of the verified checks.
    """
    if x < 2 or y < 2:
        raise DomainError("levels must be >= 2")
    # H_a(u) H_b(v) / N_b = 2 sqrt(2^(a-b) a!/b!) psi_a(u) psi_b(v) e^{(u^2+v^2)/2}
    gauge = math.exp(-u * u + (u * u + v * v) / 2)
    if x >= y:
        top = x - 2
        pu = hermite_functions(max(top, 0), u)
        pv = hermite_functions(max(y - 2, 0), v)
        total = 0.0
        for l in range(1, y // 2 + 1):
            a, b = x - 2 * l, y - 2 * l
            ratio = math.exp(0.5 * ((a - b) * math.log(2) + math.lgamma(a + 1) - math.lgamma(b + 1)))
            total += 2 * ratio * pu[a] * pv[b]
        return gauge * total
    top = y + 2 * trunc
    pu = hermite_functions(top, u)
    pv = hermite_functions(top, v)
    total = 0.0
    for m in range(trunc + 1):
        a, b = x + 2 * m, y + 2 * m
        ratio = math.exp(0.5 * ((a - b) * math.log(2) + math.lgamma(a + 1) - math.lgamma(b + 1)))
        total += 2 * ratio * pu[a] * pv[b]
    return -gauge * total


def limiting_kernel_series(k: int, u1: float, u2: float, i_max: int = 200) -> float:
    """Edge-limit kernel on level ``2k`` as a double power series.

    The ``i``-sum is truncated at ``i_max``.  Past its peak near
    ``i ~ u2^2`` the terms decrease geometrically, so the neglected tail is
    at most the last retained term times ``r / (1 - r)`` with ``r`` the
    ratio of the last two terms; a :class:`NumericError` is raised if that
    bound exceeds ``1e-12`` of the result.
    """
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    dps = 25 + int(2 * u2 * u2 / math.log(10))
    with mpmath.workdps(dps):
        a1, a2 = mpmath.mpf(u1), mpmath.mpf(u2)
        jcoef = [
            a1 ** (2 * j) / (mpmath.factorial(2 * k - 2 * j - 1) * mpmath.factorial(2 * j) * mpmath.gamma(j + mpmath.mpf(1) / 2 - k))
            for j in range(k)
        ]
        total = mpmath.mpf(0)
        last = prev = mpmath.mpf(0)
        for i in range(i_max + 1):
            prod = 1
            for a in range(1, k + 1):
                prod *= 2 * i + 2 * a - 1
            icoef = (-1) ** (i + k) * a2 ** (2 * i) * prod / mpmath.factorial(i)
            term = sum(jc * icoef / (2 * j + 2 * i + 1) for j, jc in enumerate(jcoef))
            total += term
            prev, last = last, abs(term)
        total *= 2 ** (k + 1)
        if u2 > 0 and prev > 0:
            r = last / prev
            tail = 2 ** (k + 1) * last * r / (1 - r) if r < 1 else mpmath.inf
            if tail > 1e-12 * max(abs(total), mpmath.mpf("1e-300")):
                raise NumericError(f"series tail bound {float(tail):.3e} too large at i_max={i_max}")
        return float(total)


# --- residue-sum kernels -----------------------------------------------------


def _fmul(c: RootPi, q: Fraction) -> RootPi:
    return RootPi(c.q * q, c.e)


class _LimitSeries:
    """Coefficients ``C[m1][m2]`` of ``sum C u1^m1 u2^m2`` for a limiting kernel."""

    def __init__(self, x1: int, x2: int, k: int | None):
        self.x1, self.x2, self.k = x1, x2, k
        h = Fraction(1, 2)
        wf = [("gamma", -1, 0, 1), ("gamma", -1, x1, -1), ("gamma", h, Fraction(1 - x1, 2), -1)]
        zf = [("gamma", 1, 1, -1), ("gamma", 1, x2 + 1, 1), ("gamma", -h, Fraction(-x2, 2), 1)]
        if k is not None:
            wf += [("lin", -1, x1 - 2 * k, 1), ("lin", -1, x1 - 2 * k - 1, -1)]
            zf += [("lin", 1, x2 - 2 * k, 1), ("lin", 1, x2 - 2 * k + 1, -1)]
        self.zf = zf
        self.w_poles = []
        for m1 in range(x1):
            r = residue(wf, m1)
            if r is not None:
                self.w_poles.append((m1, r))
        self.coeffs = {m1: [] for m1, _ in self.w_poles}
        self.m2_done = -1

    def extend(self, m2_max: int):
        for m2 in range(self.m2_done + 1, m2_max + 1):
            for m1, rw in self.w_poles:
                cross = ("lin", 1, m1 + self.x2 - self.x1 + 1, -1)
                rz = residue(self.zf + [cross], m2)
                if rz is not None:
                    self.coeffs[m1].append((m2, rw * rz))
        self.m2_done = max(self.m2_done, m2_max)


@lru_cache(maxsize=None)
def _limit_series(x1: int, x2: int, k: int | None) -> _LimitSeries:
    return _LimitSeries(x1, x2, k)


@lru_cache(maxsize=4096)
def _to_mpf(q_num: int, q_den: int, e: int, dps: int):
    with mpmath.workdps(dps):
        return RootPi(Fraction(q_num, q_den), e).to_mpf()


def _mp(c: RootPi, dps: int):
    return _to_mpf(c.q.numerator, c.q.denominator, c.e, dps)


def _indicator(x1, u1, x2, u2):
    if x2 < x1 and u2 < u1:
        d = x1 - x2 - 1
        return (u2 - u1) ** d / math.factorial(d)
    return 0.0


def _eval_limit(series: _LimitSeries, u1: float, u2: float) -> float:
    if u1 < 0 or u2 < 0:
        raise DomainError("positions must be >= 0")
    loss = int(2 * u2 * u2 / math.log(10)) + int(2 * u1 * u1 / math.log(10)) // 4
    dps = 20 + loss
    for _attempt in range(4):
        with mpmath.workdps(dps):
            a1, a2 = mpmath.mpf(u1), mpmath.mpf(u2)
            eps = mpmath.mpf(10) ** (-dps + 2)
            # terms peak near m2 ~ 2 u2^2; go well past before testing decay
            m2_min = int(4 * u2 * u2) + series.x2 + 12
            total = mpmath.mpf(0)
            biggest = mpmath.mpf(0)
            for m1, _ in series.w_poles:
                m2_cap = m2_min
                pos = 0
                small = 0
                last = prev = None
                inner = mpmath.mpf(0)
                while True:
                    if series.m2_done < m2_cap:
                        series.extend(m2_cap + 40)
                    lst = series.coeffs[m1]
                    while pos < len(lst) and lst[pos][0] <= m2_cap:
                        m2, c = lst[pos]
                        term = _mp(c, dps) * a2**m2
                        inner += term
                        mag = abs(term)
                        biggest = max(biggest, mag * a1**m1)
                        prev, last = last, mag
                        small = small + 1 if mag <= eps * max(biggest, abs(inner)) else 0
                        pos += 1
                    if u2 == 0 or small >= 3:
                        break
                    if m2_cap > 20000:
                        raise NumericError("z-residue series did not converge")
                    m2_cap += 40
                if u2 > 0 and prev and last and last / prev >= 0.5:
                    raise NumericError("z-residue series tail not geometrically bounded")
                total += inner * a1**m1
            if biggest == 0 or total == 0 or biggest / abs(total) < mpmath.mpf(10) ** (dps - 16):
                return float(total)
            dps += int(mpmath.log10(biggest / abs(total))) + 10
    raise NumericError("cancellation in residue sum not resolved")


def limiting_kernel(x1: int, u1: float, x2: int, u2: float) -> float:
    """Edge-limit kernel for the full staircase at two levels, by residues."""
    if x1 < 2 or x2 < 2:
        raise DomainError("levels must be >= 2")
    return _indicator(x1, u1, x2, u2) + _eval_limit(_limit_series(x1, x2, None), u1, u2)


def conditioned_kernel(k: int, x1: int, u1: float, x2: int, u2: float, trunc: int | None = None) -> float:
    """Edge-limit kernel for the staircase with the corner ``(n-k, k)`` removed.

    The ``z`` series is summed until three consecutive terms drop below the
    working precision relative to the largest term; ``trunc`` optionally
    caps the number of ``z`` poles examined.
    """
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    if x1 < 2 or x2 < 2:
        raise DomainError("levels must be >= 2")
    series = _limit_series(x1, x2, k)
    if trunc is not None:
        series.extend(trunc)
    return _indicator(x1, u1, x2, u2) + _eval_limit(series, u1, u2)


class _FiniteSeries:
    """Exact coefficients ``c(m1, m2)`` of a finite-``n`` kernel.

    The kernel equals the indicator term plus
    ``sum c(m1, m2) u1^m1 u2^m2 n^(-(m1+m2+1)/2)``.
    """

    def __init__(self, lam: tuple[int, ...], n: int, x1: int, x2: int):
        lam = tuple(lam) + (0,) * (n - len(lam))
        w_num = [(-1, x1 - n - 1 - lam[i - 1] + i) for i in range(1, n + 1)]
        w_den = [(-1, j) for j in range(x1)]
        z_num = [(1, j) for j in range(1, x2 + 1)]
        z_den = [(1, x2 - n - lam[i - 1] + i) for i in range(1, n + 1)]
        wprod = LinearProduct(w_num, w_den)
        self.terms: list[tuple[int, int, Fraction]] = []
        z_hi = lam[0] + n - x2
        for m1 in range(x1):
            rw = wprod.residue(m1)
            if rw is None:
                continue
            zprod = LinearProduct(z_num, z_den + [(1, m1 + x2 - x1 + 1)])
            for m2 in range(max(z_hi, 0)):
                rz = zprod.residue(m2)
                if rz is not None:
                    self.terms.append((m1, m2, rw * rz))

    def diagonal_mass(self) -> Fraction:
        """Exact integral of the diagonal over ``[0, sqrt(n)]``."""
        return sum((c / (m1 + m2 + 1) for m1, m2, c in self.terms), Fraction(0))


@lru_cache(maxsize=256)
def _finite_series(lam: tuple[int, ...], n: int, x1: int, x2: int) -> _FiniteSeries:
    return _FiniteSeries(lam, n, x1, x2)


def _shape_n(shape: Shape) -> int:
    fam = shape.family()
    if fam is None:
        raise DomainError("finite-n kernel needs a staircase or staircase-minus-corner shape")
    return fam[0]


def finite_n_kernel(shape: Shape, x1: int, u1: float, x2: int, u2: float) -> float:
    """Kernel of the rescaled projection of a uniform PYT of ``shape``.

    Positions live in ``[0, sqrt(n)]``; the kernel is zero outside.
    """
    n = _shape_n(shape)
    if not (2 <= x1 <= 2 * n - 2 and 2 <= x2 <= 2 * n - 2):
        raise DomainError(f"levels must lie in 2..{2 * n - 2}")
    if u1 < 0 or u2 < 0:
        raise DomainError("positions must be >= 0")
    root = math.sqrt(n)
    if u1 > root or u2 > root:
        return 0.0
    series = _finite_series(shape.rows, n, x1, x2)
    ind = _indicator(x1, u1, x2, u2) * n ** (-(x1 - x2) / 2) if x2 < x1 else 0.0
    dps = 30
    for _attempt in range(4):
        with mpmath.workdps(dps):
            s1, s2 = mpmath.mpf(u1) / mpmath.sqrt(n), mpmath.mpf(u2) / mpmath.sqrt(n)
            total = mpmath.mpf(0)
            biggest = mpmath.mpf(0)
            for m1, m2, c in series.terms:
                term = mpmath.mpf(c.numerator) / c.denominator * s1**m1 * s2**m2
                total += term
                biggest = max(biggest, abs(term))
            total /= mpmath.sqrt(n)
            biggest /= mpmath.sqrt(n)
            if biggest == 0 or total == 0 or biggest / abs(total) < mpmath.mpf(10) ** (dps - 16):
                return ind + float(total)
            dps += int(mpmath.log10(biggest / abs(total))) + 10
    raise NumericError("cancellation in finite-n residue sum not resolved")


def finite_n_diagonal_mass(shape: Shape, level: int) -> Fraction:
    """Exact ``integral_0^sqrt(n) K(level, u; level, u) du``."""
    n = _shape_n(shape)
    return _finite_series(shape.rows, n, level, level).diagonal_mass()


# --- family wrapper ----------------------------------------------------------


class KernelFamily:
    """A named kernel with fixed parameters, callable on ``(x1, u1, x2, u2)``."""

    FAMILIES = ("K_k", "corners", "limiting_series", "limiting_hermite", "limiting", "conditioned", "finite_n")

    def __init__(self, family: str, k: int | None = None, shape: Shape | None = None, i_max: int = 200, trunc: int = 50):
        if family not in self.FAMILIES:
            raise DomainError(f"unknown kernel family {family!r}")
        self.family, self.k, self.shape, self.i_max, self.trunc = family, k, shape, i_max, trunc

    def __call__(self, x1: int, u1: float, x2: int, u2: float) -> float:
        f = self.family
        if f == "K_k":
            return kernel_K(self.k, u1, u2)
        if f == "corners":
            return corners_kernel(x1, u1, x2, u2, self.trunc)
        if f == "limiting_series":
            return limiting_kernel_series(self.k, u1, u2, self.i_max)
        if f == "limiting_hermite":
            return limiting_kernel_hermite(self.k, u1, u2)
        if f == "limiting":
            return limiting_kernel(x1, u1, x2, u2)
        if f == "conditioned":
            return conditioned_kernel(self.k, x1, u1, x2, u2)
        return finite_n_kernel(self.shape, x1, u1, x2, u2)

    def metadata(self) -> str:
        return json.dumps(
            {
                "family": self.family,
                "k": self.k,
                "shape": None if self.shape is None else list(self.shape.rows),
                "i_max": self.i_max,
                "trunc": self.trunc,
            }
        )

    def grid_csv(self, x1: int, x2: int, us) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u1", "u2", "value"])
        for a in us:
            for b in us:
                w.writerow([repr(float(a)), repr(float(b)), repr(self(x1, float(a), x2, float(b)))])
        return buf.getvalue()


def level_particle_count(n: int, level: int, k: int | None = None) -> int:
    """Deterministic number of particles on a level of the finite process."""
    c = level_count(n, level)
    return c - 1 if k is not None and level == 2 * k else c
