from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction

import mpmath

from interval_exchange.utils.error import IncompatibleField


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def squarefree_split(d: int) -> tuple[int, int]:
    """
    Returns (f, e) with d = f * f * e and e squarefree.
    """

    f, e = 1, d
    p = 2
    while p * p <= e:
        while e % (p * p) == 0:
            e //= p * p
            f *= p
        p += 1 if p == 2 else 2
    return f, e


def sign_of_surd(p: int, q: int, d: int) -> int:
    """
    Exact sign of p + q * sqrt(d) for a nonsquare d (or q == 0).
    """

    if q == 0 or d == 1:
        s = p + q if d == 1 else p
        return (s > 0) - (s < 0)
    if p >= 0 and q >= 0:
        return 1 if (p or q) else 0
    if p <= 0 and q <= 0:
        return -1
    difference = p * p - q * q * d
    if p > 0:
        return (difference > 0) - (difference < 0)
    return (difference < 0) - (difference > 0)


def floor_of_surd(p: int, q: int, r: int, d: int) -> int:
    """
    Exact floor of (p + q * sqrt(d)) / r with r > 0.
    """

    if q == 0:
        return p // r
    root = math.isqrt(q * q * d)
    whole = root if q > 0 else -root - 1
    return (p + whole) // r


class ExactReal:
    """

    An exact real number (p + q * sqrt(d)) / r with integers p, q, r and r > 0.

    Values with q == 0 are rationals and always carry d == 1. Quadratic values carry a
    squarefree d > 1. The representation is normalised (gcd(p, q, r) == 1), hence two
    values are equal iff their tuples are equal.

    All arithmetic and all comparisons are exact. Mixing two different square roots
    raises IncompatibleField.

    """

    __slots__ = ("_p", "_q", "_r", "_d")

    def __init__(self, p: int, q: int = 0, r: int = 1, d: int = 1):
        if r == 0:
            raise ZeroDivisionError("ExactReal with zero denominator")
        if r < 0:
            p, q, r = -p, -q, -r
        if d == 1:
            p, q = p + q, 0
        elif q == 0:
            d = 1
        g = math.gcd(p, q, r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self._p = p
        self._q = q
        self._r = r
        self._d = d

    @staticmethod
    def rational(numerator: int, denominator: int = 1) -> ExactReal:
        return ExactReal(numerator, 0, denominator)

    @staticmethod
    def quadratic(a, b, d: int) -> ExactReal:
        """
        Builds a + b * sqrt(d) from rationals a, b and a positive integer d.
        """

        a, b = Fraction(a), Fraction(b)
        if d <= 0:
            raise ValueError("Radicand must be positive, got " + str(d))
        f, e = squarefree_split(d)
        b *= f
        if b == 0 or e == 1:
            value = a + b
            return ExactReal(value.numerator, 0, value.denominator)
        r = math.lcm(a.denominator, b.denominator)
        return ExactReal(
            a.numerator * (r // a.denominator), b.numerator * (r // b.denominator), r, e
        )

    @staticmethod
    def of(value) -> ExactReal:
        if isinstance(value, ExactReal):
            return value
        if isinstance(value, bool):
            raise TypeError("Cannot convert bool to ExactReal")
        if isinstance(value, int):
            return ExactReal(value)
        if isinstance(value, Fraction):
            return ExactReal(value.numerator, 0, value.denominator)
        raise TypeError("Cannot convert " + type(value).__name__ + " to ExactReal")

    @property
    def p(self) -> int:
        return self._p

    @property
    def q(self) -> int:
        return self._q

    @property
    def r(self) -> int:
        return self._r

    @property
    def d(self) -> int:
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._q == 0

    @property
    def a(self) -> Fraction:
        """Rational part."""
        return Fraction(self._p, self._r)

    @property
    def b(self) -> Fraction:
        """Coefficient of sqrt(d)."""
        return Fraction(self._q, self._r)

    def as_fraction(self) -> Fraction:
        if self._q:
            raise ValueError(str(self) + " is not rational")
        return Fraction(self._p, self._r)

    def __field(self, other: ExactReal) -> int:
        if self._q and other._q and self._d != other._d:
            raise IncompatibleField(
                "Cannot mix sqrt(" + str(self._d) + ") and sqrt(" + str(other._d) + ")"
            )
        return self._d if self._q else other._d

    def sign(self) -> int:
        return sign_of_surd(self._p, self._q, self._d)

    def __add__(self, other) -> ExactReal:
        try:
            other = ExactReal.of(other)
        except TypeError:
            return NotImplemented
        d = self.__field(other)
        if self._r == other._r:
            return ExactReal(self._p + other._p, self._q + other._q, self._r, d)
        return ExactReal(
            self._p * other._r + other._p * self._r,
            self._q * other._r + other._q * self._r,
            self._r * other._r,
            d,
        )

    __radd__ = __add__

    def __neg__(self) -> ExactReal:
        return ExactReal(-self._p, -self._q, self._r, self._d)

    def __sub__(self, other) -> ExactReal:
        try:
            other = ExactReal.of(other)
        except TypeError:
            return NotImplemented
        d = self.__field(other)
        if self._r == other._r:
            return ExactReal(self._p - other._p, self._q - other._q, self._r, d)
        return ExactReal(
            self._p * other._r - other._p * self._r,
            self._q * other._r - other._q * self._r,
            self._r * other._r,
            d,
        )

    def __rsub__(self, other) -> ExactReal:
        try:
            other = ExactReal.of(other)
        except TypeError:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> ExactReal:
        try:
            other = ExactReal.of(other)
        except TypeError:
            return NotImplemented
        d = self.__field(other)
        return ExactReal(
            self._p * other._p + self._q * other._q * d,
            self._p * other._q + self._q * other._p,
            self._r * other._r,
            d,
        )

    __rmul__ = __mul__

    def inverse(self) -> ExactReal:
        norm = self._p * self._p - self._q * self._q * self._d
        if norm == 0:
            raise ZeroDivisionError("ExactReal division by zero")
        return ExactReal(self._r * self._p, -self._r * self._q, norm, self._d)

    def __truediv__(self, other) -> ExactReal:
        try:
            other = ExactReal.of(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> ExactReal:
        try:
            other = ExactReal.of(other)
        except TypeError:
            return NotImplemented
        return other * self.inverse()

    def __abs__(self) -> ExactReal:
        return -self if self.sign() < 0 else self

    def __floor__(self) -> int:
        return floor_of_surd(self._p, self._q, self._r, self._d)

    def __ceil__(self) -> int:
        return -floor_of_surd(-self._p, -self._q, self._r, self._d)

    def floor(self) -> int:
        return self.__floor__()

    def frac(self) -> ExactReal:
        """
        Fractional part, in [0, 1).
        """

        whole = self.__floor__()
        return ExactReal(self._p - whole * self._r, self._q, self._r, self._d)

    def __cmp(self, other) -> int:
        other = ExactReal.of(other)
        d = self.__field(other)
        return sign_of_surd(
            self._p * other._r - other._p * self._r,
            self._q * other._r - other._q * self._r,
            d,
        )

    def __eq__(self, other) -> bool:
        try:
            other = ExactReal.of(other)
        except TypeError:
            return NotImplemented
        return (
            self._p == other._p
            and self._q == other._q
            and self._r == other._r
            and self._d == other._d
        )

    def __hash__(self) -> int:
        if self._q == 0:
            return hash(Fraction(self._p, self._r))
        return hash((self._p, self._q, self._r, self._d))

    def __lt__(self, other) -> bool:
        return self.__cmp(other) < 0

    def __le__(self, other) -> bool:
        return self.__cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self.__cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self.__cmp(other) >= 0

    def __float__(self) -> float:
        if self._q == 0:
            return float(Fraction(self._p, self._r))
        root = math.sqrt(self._d)
        if (self._p > 0) != (self._q > 0) and self._p != 0:
            # conjugate form avoids the cancellation in p + q * sqrt(d)
            norm = self._p * self._p - self._q * self._q * self._d
            return norm / (self._p - self._q * root) / self._r
        return (self._p + self._q * root) / self._r

    def to_mpf(self, dps: int | None = None) -> mpmath.mpf:
        """
        High-precision value. Uses the conjugate when p and q * sqrt(d) nearly cancel.
        """

        with mpmath.workdps(dps or mpmath.mp.dps):
            if self._q == 0:
                return mpmath.mpf(self._p) / self._r
            root = mpmath.sqrt(self._d)
            if (self._p > 0) != (self._q > 0) and self._p != 0:
                norm = self._p * self._p - self._q * self._q * self._d
                return mpmath.mpf(norm) / (self._p - self._q * root) / self._r
            return (self._p + self._q * root) / self._r

    def __str__(self) -> str:
        rational = str(self.a)
        if self._q == 0:
            return rational
        surd = str(abs(self.b)) + "*sqrt(" + str(self._d) + ")"
        sign = "-" if self._q < 0 else "+"
        if self._p == 0:
            return ("-" if self._q < 0 else "") + surd
        return rational + sign + surd

    def __repr__(self) -> str:
        return "ExactReal(" + str(self) + ")"

    def __reduce__(self):
        return (ExactReal, (self._p, self._q, self._r, self._d))


ZERO = ExactReal(0)
ONE = ExactReal(1)
HALF = ExactReal(1, 0, 2)


class CirclePoint(ExactReal):
    """
    An ExactReal in [0, 1).
    """

    __slots__ = ()

    @staticmethod
    def of(value) -> CirclePoint:
        value = ExactReal.of(value)
        if value.sign() < 0 or value >= 1:
            raise ValueError(str(value) + " is not a point of [0, 1)")
        return CirclePoint(value.p, value.q, value.r, value.d)


def compare(a, b) -> Ordering:
    difference = ExactReal.of(a) - ExactReal.of(b)
    return Ordering(difference.sign())


def circle_add(x, y) -> CirclePoint:
    s = ExactReal.of(x) + ExactReal.of(y)
    if s >= 1:
        s = s - 1
    return CirclePoint.of(s)


def circle_sub(x, y) -> CirclePoint:
    s = ExactReal.of(x) - ExactReal.of(y)
    if s.sign() < 0:
        s = s + 1
    return CirclePoint.of(s)


def nearest_int_dist(x) -> ExactReal:
    f = ExactReal.of(x).frac()
    g = ONE - f
    return f if f <= g else g
