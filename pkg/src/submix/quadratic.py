"""Exact numbers of the form ``p + q*sqrt(d)`` with rational p, q."""
from __future__ import annotations

import decimal
import math
import numbers
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = f*f*r`` with r square-free; return (f, r)."""
    f, r = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1 if p == 2 else 2
    return f, r * m


class QuadraticNumber(numbers.Real):
    """``p + q*sqrt(d)`` with d square-free; rationals have ``q == d == 0``.

    Two numbers with different non-trivial radicands cannot be combined.
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p: Rational = 0, q: Rational = 0, d: int = 0):
        p, q = Fraction(p), Fraction(q)
        if d < 0:
            raise ValueError("radicand must be nonnegative")
        if d and q:
            f, d = _squarefree_split(d)
            q *= f
            if d == 1:
                p, q, d = p + q, Fraction(0), 0
        else:
            q, d = Fraction(0), 0
        self.p, self.q, self.d = p, q, d

    @classmethod
    def sqrt(cls, x: Rational) -> "QuadraticNumber":
        x = Fraction(x)
        if x < 0:
            raise ValueError("square root of a negative number")
        return cls(0, Fraction(1, x.denominator), x.numerator * x.denominator)

    @classmethod
    def coerce(cls, x) -> "QuadraticNumber":
        if isinstance(x, QuadraticNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot convert {type(x).__name__} exactly")

    def is_rational(self) -> bool:
        return self.q == 0

    def rational(self) -> Fraction:
        if self.q:
            raise ValueError(f"{self} is irrational")
        return self.p

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.p, -self.q, self.d)

    def norm(self) -> Fraction:
        return self.p * self.p - self.q * self.q * self.d

    def _radicand(self, other: "QuadraticNumber") -> int:
        if self.d and other.d and self.d != other.d:
            raise ValueError(f"incompatible radicands {self.d} and {other.d}")
        return self.d or other.d

    def sign(self) -> int:
        ps = (self.p > 0) - (self.p < 0)
        qs = (self.q > 0) - (self.q < 0)
        if qs == 0:
            return ps
        if ps == 0 or ps == qs:
            return qs
        # opposite signs: compare p^2 with q^2 d
        return ps if self.p * self.p > self.q * self.q * self.d else qs

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        try:
            other = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._radicand(other)
        return QuadraticNumber(self.p + other.p, self.q + other.q, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.p, -self.q, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._radicand(other)
        return QuadraticNumber(self.p * other.p + self.q * other.q * d,
                               self.p * other.q + self.q * other.p, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = QuadraticNumber.coerce(other)
        except TypeError:
            return NotImplemented
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return self * other.conjugate() * QuadraticNumber(1 / n)

    def __rtruediv__(self, other):
        return QuadraticNumber.coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return float(self) ** k
        if k < 0:
            return 1 / (self ** -k)
        result, base = QuadraticNumber(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __rpow__(self, base):
        return base ** float(self)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # comparison -----------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            return (float(self) > other) - (float(self) < other)
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, (QuadraticNumber, int, Fraction)):
            other = QuadraticNumber.coerce(other)
            return (self.p, self.q, self.d) == (other.p, other.q, other.d)
        if isinstance(other, float):
            return self.is_rational() and float(self.p) == other
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return bool(self.p or self.q)

    # conversions ----------------------------------------------------------

    def __float__(self):
        if not self.q:
            return float(self.p)
        return float(self.to_decimal(30))

    def to_decimal(self, places: int = 12) -> decimal.Decimal:
        with decimal.localcontext() as ctx:
            ctx.prec = places + 30 + len(str(abs(self.p.numerator) + abs(self.q.numerator)))
            value = decimal.Decimal(self.p.numerator) / self.p.denominator
            if self.q:
                root = decimal.Decimal(self.d).sqrt()
                value += decimal.Decimal(self.q.numerator) / self.q.denominator * root
            return value.quantize(decimal.Decimal(1).scaleb(-places),
                                  rounding=decimal.ROUND_HALF_EVEN)

    def to_json(self) -> dict:
        return {"p": str(self.p), "q": str(self.q), "d": self.d,
                "decimal": str(self.to_decimal(12))}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadraticNumber":
        return cls(Fraction(obj["p"]), Fraction(obj["q"]), int(obj["d"]))

    def __repr__(self):
        return f"QuadraticNumber({self.p!s}, {self.q!s}, {self.d})"

    def __str__(self):
        if not self.q:
            return str(self.p)
        q = self.q
        root = f"sqrt({self.d})" if abs(q) == 1 else f"{abs(q)}*sqrt({self.d})"
        if not self.p:
            return root if q > 0 else f"-{root}"
        return f"{self.p}{'+' if q > 0 else '-'}{root}"

    # numbers.Real protocol -------------------------------------------------

    def __trunc__(self):
        return math.trunc(self._approx())

    def __floor__(self):
        return math.floor(self._approx())

    def __ceil__(self):
        return math.ceil(self._approx())

    def __round__(self, ndigits=None):
        return round(self._approx(), ndigits)

    def _approx(self) -> Fraction:
        # irrational values are never integers, so 40 places settle floor/ceil
        return self.p if not self.q else Fraction(self.to_decimal(40))

    def __floordiv__(self, other):
        return math.floor(self / other)

    def __rfloordiv__(self, other):
        return math.floor(other / self)

    def __mod__(self, other):
        return self - other * (self // other)

    def __rmod__(self, other):
        return other - self * (other // self)

    def __complex__(self):
        return complex(float(self))


def as_exact(x) -> QuadraticNumber:
    return QuadraticNumber.coerce(x)
