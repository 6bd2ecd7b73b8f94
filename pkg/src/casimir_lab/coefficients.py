"""Exact Gaussian rationals.

Real values stay as ``int`` or ``Fraction`` so that the bulk of the series
arithmetic runs on the fast built-in paths. A :class:`GaussianRational` only
appears when an imaginary part is genuinely present, and collapses back to a
real number as soon as that part cancels.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Real = Union[int, Fraction]


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re: Real = 0, im: Real = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _parts(x) -> tuple[Fraction, Fraction] | None:
        if isinstance(x, GaussianRational):
            return x.re, x.im
        if isinstance(x, (int, Fraction)):
            return Fraction(x), Fraction(0)
        if isinstance(x, Rational):
            return Fraction(x.numerator, x.denominator), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gaussian(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gaussian(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return gaussian(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        return gaussian(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        a, b = p
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return gaussian((self.re * a + self.im * b) / n, (self.im * a - self.re * b) / n)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return NotImplemented
        return GaussianRational(*p) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return 1 / (self ** (-n))
        out: object = 1
        base: object = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return gaussian(self.re, -self.im)

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


I = GaussianRational(0, 1)


def gaussian(re: Real, im: Real = 0):
    """Build an exact scalar, returning a plain rational when ``im`` is zero."""
    if im == 0:
        return _tidy(re)
    return GaussianRational(re, im)


def _tidy(x: Real) -> Real:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def real_part(c) -> Fraction:
    return c.re if isinstance(c, GaussianRational) else Fraction(c)


def imag_part(c) -> Fraction:
    return c.im if isinstance(c, GaussianRational) else Fraction(0)


def parse_scalar(re: str, im: str = "0"):
    """Inverse of the ``"p/q"`` string encoding used in JSON output."""
    return gaussian(Fraction(re), Fraction(im))


def format_rational(x: Fraction | int) -> str:
    return str(Fraction(x))
