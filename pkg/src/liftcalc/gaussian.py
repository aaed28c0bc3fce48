"""Exact complex rationals ``(a + b*i) / d`` with integer ``a, b, d``."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational


class GaussianRational:
    """A complex number with exact rational real and imaginary parts.

    Stored as ``(a + b*i) / d`` with ``d > 0`` and ``gcd(a, b, d) == 1`` so
    that equal values share one representation.
    """

    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(gcd(a, b), d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        self._a, self._b, self._d = a, b, d
        self._hash = hash((a, b, d))

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        obj = cls.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, complex):
            if value.real != int(value.real) or value.imag != int(value.imag):
                raise TypeError(f"refusing inexact complex constant {value!r}")
            return cls(int(value.real), int(value.imag))
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_one(self) -> bool:
        return self._a == 1 and self._b == 0 and self._d == 1

    def is_real(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        """True for real integers only."""
        return self._b == 0 and self._d == 1

    def __add__(self, other):
        o = _as_gr(other)
        if o is NotImplemented:
            return o
        d = self._d * o._d
        return GaussianRational._raw(self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, d)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __sub__(self, other):
        o = _as_gr(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _as_gr(other)
        if o is NotImplemented:
            return o
        a = self._a * o._a - self._b * o._b
        b = self._a * o._b + self._b * o._a
        return GaussianRational._raw(a, b, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> GaussianRational:
        if self.is_zero():
            raise ZeroDivisionError("zero denominator")
        # 1 / ((a + bi)/d) = d (a - bi) / (a^2 + b^2)
        n = self._a * self._a + self._b * self._b
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        o = _as_gr(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return _as_gr(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = ONE
        for _ in range(abs(n)):
            result = result * base
        return result

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self._a, -self._b, self._d)

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    def __eq__(self, other):
        o = _as_gr(other)
        if o is NotImplemented:
            return False
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        return self._hash

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return "i" if im == 1 else ("-i" if im == -1 else f"{im}*i")
        sign = "+" if im > 0 else "-"
        mag = abs(im)
        imag = "i" if mag == 1 else f"{mag}*i"
        return f"({re} {sign} {imag})"

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"


def _as_gr(value):
    if isinstance(value, GaussianRational):
        return value
    try:
        return GaussianRational.coerce(value)
    except TypeError:
        return NotImplemented


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)
