"""Exact scalars of the form a + b*alpha with alpha a fixed irrational.

The three-parameter family D(2,1;alpha) needs bilinear-form values in the ring
Q + Q*alpha.  Since alpha is irrational, a + b*alpha = 0 forces a = b = 0, so
equality, zero tests and proportionality are all decidable exactly on the pair
(a, b).  No division is provided except the proportionality test `ratio`, which
is all the membership machinery needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, "QAlpha"]


class QAlpha:
    """a + b*alpha with a, b rational and alpha a formal irrational."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return QAlpha(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QAlpha(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        # alpha stays formal: products with another QAlpha would need alpha^2,
        # which never arises here (forms pair lattice vectors, one alpha each
        # side at most).  Rational multiples only.
        if isinstance(other, QAlpha):
            if other.b == 0:
                other = other.a
            elif self.b == 0:
                self, other = QAlpha(other.a, other.b), self.a
            else:
                raise TypeError("product of two irrational QAlpha values")
        return QAlpha(self.a * other, self.b * other)

    __rmul__ = __mul__

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = _coerce(other)
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def ratio(self, other: "QAlpha"):
        """Return rational r with self = r*other, or None if no such r."""
        other = _coerce(other)
        if other.is_zero():
            return None
        if other.a == 0:
            if self.a != 0:
                return None
            return Fraction(self.b, other.b)
        if other.b == 0:
            if self.b != 0:
                return None
            return Fraction(self.a, other.a)
        ra = Fraction(self.a, other.a)
        rb = Fraction(self.b, other.b)
        return ra if ra == rb else None

    def __repr__(self):
        return f"QAlpha({self.a!s}, {self.b!s})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*alpha"
        return f"{self.a}+{self.b}*alpha"


def _coerce(x) -> QAlpha:
    if isinstance(x, QAlpha):
        return x
    return QAlpha(Fraction(x), 0)


def scalar_is_zero(x: Scalar) -> bool:
    """Zero test valid for Fraction, int and QAlpha alike."""
    if isinstance(x, QAlpha):
        return x.is_zero()
    return x == 0


def scalar_components(x: Scalar) -> tuple[Fraction, Fraction]:
    """Split a scalar into (rational part, alpha coefficient)."""
    if isinstance(x, QAlpha):
        return x.a, x.b
    return Fraction(x), Fraction(0)
