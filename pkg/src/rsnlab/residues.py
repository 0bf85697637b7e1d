"""Exact residue bookkeeping for products of linear and Gamma factors.

An integrand in one variable ``s`` is a list of factors ``(kind, a, b, power)``
meaning ``(a*s + b)**power`` for ``kind == "lin"`` and
``Gamma(a*s + b)**power`` for ``kind == "gamma"``, with ``power`` in
``{+1, -1}`` and rational ``a, b``.  At a point ``s0`` each factor has a
leading Laurent term ``coeff * (s - s0)**order``; the product of leading terms
gives the order of the whole integrand and, for a simple pole, its residue.

Values are kept exact as ``q * pi**(e/2)`` (class :class:`RootPi`), which
covers Gamma at integers and half-integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import NumericError


@dataclass(frozen=True)
class RootPi:
    """The number ``q * sqrt(pi)**e``."""

    q: Fraction
    e: int = 0

    def __mul__(self, other: "RootPi") -> "RootPi":
        return RootPi(self.q * other.q, self.e + other.e)

    def inverse(self) -> "RootPi":
        return RootPi(1 / self.q, -self.e)

    def to_mpf(self):
        val = mpmath.mpf(self.q.numerator) / self.q.denominator
        if self.e:
            val *= mpmath.sqrt(mpmath.pi) ** self.e
        return val

    def __float__(self):
        return float(self.to_mpf())


ONE = RootPi(Fraction(1))


def gamma_exact(s: Fraction) -> RootPi:
    """Gamma at a positive integer or any half-integer."""
    if s.denominator == 1:
        if s <= 0:
            raise NumericError(f"Gamma has a pole at {s}")
        return RootPi(Fraction(math.factorial(int(s) - 1)))
    if s.denominator != 2:
        raise NumericError(f"no exact Gamma value at {s}")
    # Gamma(1/2) = sqrt(pi); step with Gamma(s+1) = s*Gamma(s)
    q = Fraction(1)
    t = Fraction(1, 2)
    while t < s:
        q *= t
        t += 1
    while t > s:
        t -= 1
        q /= t
    return RootPi(q, 1)


def leading_term(factor, s0: Fraction) -> tuple[int, RootPi]:
    kind, a, b, power = factor
    s = a * s0 + b
    if kind == "lin":
        if s == 0:
            return power, RootPi(Fraction(a) ** power)
        return 0, RootPi(Fraction(s) ** power)
    if kind == "gamma":
        if s.denominator == 1 and s <= 0:
            j = int(-s)
            c = RootPi(Fraction((-1) ** j, math.factorial(j)) / a)
            return (-1, c) if power == 1 else (1, c.inverse())
        g = gamma_exact(Fraction(s))
        return 0, g if power == 1 else g.inverse()
    raise ValueError(f"unknown factor kind {kind!r}")


def residue(factors, s0) -> RootPi | None:
    """Residue of the product at ``s0``; ``None`` when the point is regular.

    Raises :class:`NumericError` on a pole of order two or more.
    """
    s0 = Fraction(s0)
    order = 0
    coeff = ONE
    for f in factors:
        o, c = leading_term(f, s0)
        order += o
        coeff = coeff * c
    if order >= 0:
        return None
    if order < -1:
        raise NumericError(f"pole of order {-order} at {s0}")
    return coeff


class LinearProduct:
    """Fast exact residues for products of integer-coefficient linear factors.

    ``num`` and ``den`` are lists of ``(a, b)`` meaning factors ``a*s + b`` in
    the numerator and denominator.  All arithmetic is on Python integers with
    a single division at the end.
    """

    def __init__(self, num, den):
        self.num = [(int(a), int(b)) for a, b in num]
        self.den = [(int(a), int(b)) for a, b in den]

    def residue(self, s0: int) -> Fraction | None:
        top, bot = 1, 1
        order = 0
        for a, b in self.num:
            v = a * s0 + b
            if v == 0:
                order += 1
                top *= a
            else:
                top *= v
        for a, b in self.den:
            v = a * s0 + b
            if v == 0:
                order -= 1
                bot *= a
            else:
                bot *= v
        if order >= 0:
            return None
        if order < -1:
            raise NumericError(f"pole of order {-order} at {s0}")
        return Fraction(top, bot)
