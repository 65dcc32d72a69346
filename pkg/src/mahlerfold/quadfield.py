"""Exact arithmetic in Q(sqrt(5)) and Q(i).

``QuadNum`` stores a + b*sqrt(5) with exact rational components; the
components may themselves be ``GaussianRational`` values, which gives exact
arithmetic in Q(i, sqrt(5)) for root-of-unity evaluations.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp


class GaussianRational:
    """a + b*i with exact rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __eq__(self, other):
        other = _coerce_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        other = _coerce_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        other = _coerce_gauss(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        c = self * other.conjugate()
        return GaussianRational(c.re / n, c.im / n)

    def __rtruediv__(self, other):
        return _coerce_gauss(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / self ** (-n)
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_mpc(self) -> mp.mpc:
        return mp.mpc(
            mp.mpf(self.re.numerator) / self.re.denominator,
            mp.mpf(self.im.numerator) / self.im.denominator,
        )

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re}{'+' if self.im >= 0 else ''}{self.im}i"


def _coerce_gauss(v):
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, (int, Fraction)):
        return GaussianRational(v, 0)
    return NotImplemented


class QuadNum:
    """a + b*sqrt(5); conjugation (a, -b) is a field automorphism."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        if isinstance(a, (int, Fraction)):
            a = Fraction(a)
        if isinstance(b, (int, Fraction)):
            b = Fraction(b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("QuadNum is immutable")

    @classmethod
    def sqrt5(cls) -> QuadNum:
        return cls(0, 1)

    @classmethod
    def phi(cls) -> QuadNum:
        """The golden ratio (1 + sqrt(5)) / 2."""
        return cls(Fraction(1, 2), Fraction(1, 2))

    def __eq__(self, other):
        other = _coerce_quad(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __add__(self, other):
        other = _coerce_quad(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadNum(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadNum(-self.a, -self.b)

    def __sub__(self, other):
        other = _coerce_quad(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce_quad(other)
        if other is NotImplemented:
            return NotImplemented
        return QuadNum(
            self.a * other.a + 5 * (self.b * other.b),
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadNum:
        return QuadNum(self.a, -self.b)

    def norm(self):
        """a^2 - 5 b^2; multiplicative."""
        return self.a * self.a - 5 * (self.b * self.b)

    def inverse(self) -> QuadNum:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        c = self.conjugate()
        return QuadNum(c.a / n, c.b / n)

    def __truediv__(self, other):
        other = _coerce_quad(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce_quad(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadNum(1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_mp(self):
        """Embed numerically at the current mpmath precision."""
        s5 = mp.sqrt(5)
        if isinstance(self.a, GaussianRational):
            return self.a.to_mpc() + self.b.to_mpc() * s5
        return (
            mp.mpf(self.a.numerator) / self.a.denominator
            + (mp.mpf(self.b.numerator) / self.b.denominator) * s5
        )

    def __repr__(self):
        return f"QuadNum({self.a!r}, {self.b!r})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        return f"{self.a} + ({self.b})*sqrt5"


def _coerce_quad(v):
    if isinstance(v, QuadNum):
        return v
    if isinstance(v, (int, Fraction)):
        return QuadNum(v, 0)
    if isinstance(v, GaussianRational):
        return QuadNum(v, GaussianRational(0))
    return NotImplemented


PHI = QuadNum.phi()
SQRT5 = QuadNum.sqrt5()
