"""Exact scalar types: rationals and real quadratic extensions Q(sqrt(d)).

Rationals are plain ``fractions.Fraction``; ``QuadraticNumber`` adjoins a
square root of a fixed squarefree positive integer d (d=10 is the one the
rest of the engine actually uses).
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction


def rat(x) -> Fraction:
    """Coerce ints, strings like '3/5' and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class QuadraticNumber:
    """a + b*sqrt(d) with a, b rational and d a fixed squarefree integer > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=10):
        self.a = rat(a)
        self.b = rat(b)
        self.d = int(d)
        if self.d <= 1:
            raise ValueError("discriminant must be > 1")

    # -- coercion -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ValueError("mixed discriminants %d and %d" % (self.d, other.d))
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other, 0, self.d)
        return NotImplemented

    # -- ring / field operations -------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.a * self.a - self.d * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("zero or non-invertible quadratic number")
        return QuadraticNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadraticNumber(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons / hashing ----------------------------------------------
    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        return "(%s%+s*sqrt(%d))" % (self.a, self.b, self.d)

    def to_json(self):
        return {"a": fraction_str(self.a), "b": fraction_str(self.b), "d": self.d}


SQRT10 = QuadraticNumber(0, 1, 10)


def is_zero(x) -> bool:
    """Zero test that works across Fraction, QuadraticNumber and MultiPoly."""
    return not x


def fraction_str(x: Fraction) -> str:
    """Serialize a rational as 'num/den' (always with denominator)."""
    f = rat(x)
    return "%d/%d" % (f.numerator, f.denominator)


def scalar_json(x):
    """JSON form of any supported scalar."""
    if isinstance(x, QuadraticNumber):
        return x.to_json()
    if isinstance(x, (int, Fraction)):
        return fraction_str(rat(x))
    # MultiPoly and friends provide their own hook
    return x.to_json()
