"""Gap probability of the rank-``k`` Hermite kernel and the two spacing densities.

The kernel ``kernel_K(k, .)`` restricted to ``[0, t]`` equals
``sum_a phi_a(u) phi_a(v)`` with ``phi_a = sqrt(2) psi_{2a}`` orthonormal on
``[0, inf)``.  Its Fredholm determinant on ``[0, t]`` is therefore the
``k x k`` determinant ``det(I - G(t))`` with ``G`` the Gram matrix of the
``phi_a`` on ``[0, t]``; this is the probability that the ``2k x 2k`` aGUE
matrix has no positive eigenvalue below ``t``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError
from .kernels import hermite_functions
from .spacings import double_factorial

QUAD_RTOL = 1e-12
_GL_ORDER = 32
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)
_GL2_NODES, _GL2_WEIGHTS = np.polynomial.legendre.leggauss(2 * _GL_ORDER)
# beyond this point the Gaussian weight is below double precision for k <= 8
_TAIL_SPAN = 12.0
_COND_MAX = 1e13


def phi(k: int, u) -> np.ndarray:
    """``phi_a(u)`` for ``a = 0..k-1``, stacked along the first axis."""
    return math.sqrt(2.0) * hermite_functions(2 * k - 2, u)[0::2]


def phi_prime(k: int, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    psi = hermite_functions(2 * k - 1, u)
    out = np.empty((k,) + u.shape)
    for a in range(k):
        j = 2 * a
        d = -math.sqrt((j + 1) / 2) * psi[j + 1]
        if j > 0:
            d = d + math.sqrt(j / 2) * psi[j - 1]
        out[a] = math.sqrt(2.0) * d
    return out


def _panel(k, lo, hi, order_nodes, order_weights):
    half = (hi - lo) / 2
    mid = (hi + lo) / 2
    x = mid + half * order_nodes
    p = phi(k, x)
    return half * np.einsum("an,bn,n->ab", p, p, order_weights)


def _gl_adaptive(k: int, lo: float, hi: float, depth: int = 0) -> np.ndarray:
    if hi <= lo:
        return np.zeros((k, k))
    coarse = _panel(k, lo, hi, _GL_NODES, _GL_WEIGHTS)
    fine = _panel(k, lo, hi, _GL2_NODES, _GL2_WEIGHTS)
    err = np.abs(fine - coarse).max()
    if err <= QUAD_RTOL * max(np.abs(fine).max(), 1e-300) or err < 1e-300:
        return fine
    if depth > 30:
        raise NumericError(f"Gauss-Legendre quadrature did not converge on [{lo}, {hi}]")
    mid = (lo + hi) / 2
    return _gl_adaptive(k, lo, mid, depth + 1) + _gl_adaptive(k, mid, hi, depth + 1)


@dataclass
class GramState:
    k: int
    t: float
    G: np.ndarray
    complement: np.ndarray  # I - G, computed directly as a tail integral for large t


def gram(k: int, t: float) -> GramState:
    """Gram matrix on ``[0, t]`` (panels split at ``t/2``) and ``I - G``.

    For ``t`` past the bulk of the weight, ``I - G`` is integrated directly
    over ``[t, inf)`` so that no cancellation occurs.
    """
    if k < 1:
        raise DomainError(f"need k >= 1, got {k}")
    if t < 0:
        raise DomainError(f"need t >= 0, got {t}")
    if t == 0:
        return GramState(k, 0.0, np.zeros((k, k)), np.eye(k))
    if t <= 1.0:
        G = _gl_adaptive(k, 0.0, t / 2) + _gl_adaptive(k, t / 2, t)
        return GramState(k, t, G, np.eye(k) - G)
    tail = _gl_adaptive(k, t, t + _TAIL_SPAN / 2) + _gl_adaptive(k, t + _TAIL_SPAN / 2, t + _TAIL_SPAN)
    return GramState(k, t, np.eye(k) - tail, tail)


def survival_tfs(k: int, t: float) -> float:
    """``P(T_FS(k) > t)`` as ``det(I - G(t))``."""
    return float(np.linalg.det(gram(k, t).complement))


def _solve(state: GramState, rhs: np.ndarray) -> np.ndarray:
    M = state.complement
    if np.linalg.cond(M) > _COND_MAX:
        raise NumericError(f"I - G is numerically singular at t={state.t}")
    return np.linalg.solve(M, rhs)


def survival_derivative(k: int, t: float) -> float:
    """``F'(t) = -F(t) phi(t)^T (I - G(t))^{-1} phi(t)``."""
    st = gram(k, t)
    F = np.linalg.det(st.complement)
    p = phi(k, t)
    return float(-F * p @ _solve(st, p))


def survival_second_derivative(k: int, t: float, h: float = 1e-4) -> float:
    """Central differences of ``F'`` with step ``h``, Richardson-extrapolated once.

    Within ``h`` of the origin a second-order forward stencil replaces the
    central one.
    """
    def fprime(s):
        return survival_derivative(k, s)

    if t < h:
        f0 = fprime(t)

        def diff(step):
            return (-3 * f0 + 4 * fprime(t + step) - fprime(t + 2 * step)) / (2 * step)

    else:

        def diff(step):
            return (fprime(t + step) - fprime(t - step)) / (2 * step)

    return (4 * diff(h / 2) - diff(h)) / 3


def survival_second_derivative_exact(k: int, t: float) -> float:
    """Closed form ``F'' = -2 F phi'(t)^T (I - G)^{-1} phi(t)``."""
    st = gram(k, t)
    F = np.linalg.det(st.complement)
    return float(-2 * F * phi_prime(k, t) @ _solve(st, phi(k, t)))


def ghat_constant(k: int) -> float:
    return math.sqrt(math.pi) / 2 * double_factorial(2 * k - 2) / double_factorial(2 * k - 1)


def density_g(k: int, x: float) -> float:
    """Limiting density of the scaled spacing around a fixed time."""
    if x <= 0:
        raise DomainError(f"need x > 0, got {x}")
    return x * survival_second_derivative(k, x)


def density_ghat(k: int, x: float) -> float:
    """Limiting density of the scaled spacing seen from a swap."""
    if x <= 0:
        raise DomainError(f"need x > 0, got {x}")
    return ghat_constant(k) * survival_second_derivative(k, x)


def tfs_cdf(k: int, t: float) -> float:
    return 1.0 - survival_tfs(k, t) if t > 0 else 0.0


def g_cdf(k: int, x: float) -> float:
    """``int_0^x g_k = x F'(x) - F(x) + 1``."""
    if x <= 0:
        return 0.0
    return x * survival_derivative(k, x) - survival_tfs(k, x) + 1.0


def ghat_cdf(k: int, x: float) -> float:
    """``int_0^x ghat_k = c_k (F'(x) - F'(0))``."""
    if x <= 0:
        return 0.0
    return ghat_constant(k) * (survival_derivative(k, x) - survival_derivative(k, 0.0))


def upper_limit(k: int, tol: float = 1e-17) -> float:
    """A point beyond which the survival function is below ``tol``."""
    t = 1.0
    while survival_tfs(k, t) > tol:
        t += 0.5
    return t


def table_csv(k: int, ts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "F", "g", "ghat"])
    for t in ts:
        t = float(t)
        F = survival_tfs(k, t)
        g = density_g(k, t) if t > 0 else 0.0
        gh = density_ghat(k, t) if t > 0 else 0.0
        w.writerow([repr(t), repr(F), repr(g), repr(gh)])
    return buf.getvalue()
