"""Arithmetic mixing obstructions: the length GCD condition, tile-length ratios, Bezout pairs."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import IntMatrix2
from .quadratic import QuadraticNumber

Matrix = Sequence[Sequence[int]]
Length = Union[int, Fraction, QuadraticNumber]


class SingularMatrixError(ValueError):
    pass


class BezoutError(ValueError):
    def __init__(self, l0: int, l1: int, gcd: int):
        super().__init__(f"gcd({l0}, {l1}) = {gcd} != 1")
        self.gcd = gcd


def determinant(m: Matrix) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeOrbit:
    """The sequence ``r M^n mod p`` for ``n = 0, 1, ...`` up to its first repeat."""

    prime: int
    vectors: tuple[tuple[int, ...], ...]
    repeat_from: int          # vectors[len(vectors)] would equal vectors[repeat_from]
    zero_at: Optional[int]    # first n with r M^n == 0 mod p

    def to_json(self) -> dict:
        return {"prime": self.prime, "vectors": [list(v) for v in self.vectors],
                "repeat_from": self.repeat_from, "zero_at": self.zero_at}


@dataclass(frozen=True)
class GcdCertificate:
    holds: bool
    failing_prime: Optional[int] = None
    failing_power: Optional[int] = None
    orbits: tuple[PrimeOrbit, ...] = field(default=())

    def to_json(self) -> dict:
        return {"holds": self.holds, "failing_prime": self.failing_prime,
                "failing_power": self.failing_power,
                "orbits": [o.to_json() for o in self.orbits]}


def _rows(m) -> list[list[int]]:
    return m.rows() if isinstance(m, IntMatrix2) else [list(r) for r in m]


def length_vector(m, n: int) -> tuple[int, ...]:
    """``r M^n`` with ``r = (1, ..., 1)``: the lengths of the n-th iterated images."""
    rows = _rows(m)
    v = [1] * len(rows)
    for _ in range(n):
        v = [sum(v[i] * rows[i][j] for i in range(len(rows))) for j in range(len(rows))]
    return tuple(v)


def prime_orbit(m, p: int) -> PrimeOrbit:
    rows = _rows(m)
    size = len(rows)
    v = tuple([1 % p] * size)
    seen = {v: 0}
    vectors = [v]
    zero_at = None
    while True:
        v = tuple(sum(v[i] * rows[i][j] for i in range(size)) % p for j in range(size))
        if zero_at is None and not any(v):
            zero_at = len(vectors)
        if v in seen:
            return PrimeOrbit(p, tuple(vectors), seen[v], zero_at)
        seen[v] = len(vectors)
        vectors.append(v)


def gcd_condition(m, rule_lengths: Optional[Sequence[int]] = None) -> GcdCertificate:
    """Check that ``gcd(|s^n(i)|) == 1`` for every n >= 1.

    Only primes dividing ``det M`` can divide every length; for each such
    prime the orbit of ``(1, ..., 1)`` under ``v -> v M mod p`` is followed
    until it repeats (at most ``p**size`` steps).
    """
    rows = _rows(m)
    if rule_lengths is not None and tuple(rule_lengths) != length_vector(rows, 1):
        raise ValueError(f"rule lengths {tuple(rule_lengths)} are not the column sums of M")
    det = determinant(rows)
    if det == 0:
        raise SingularMatrixError("substitution matrix is singular")
    orbits = tuple(prime_orbit(rows, p) for p in prime_factors(det))
    for orbit in orbits:
        if orbit.zero_at is not None:
            return GcdCertificate(False, orbit.prime, orbit.zero_at, orbits)
    return GcdCertificate(True, orbits=orbits)


class RatioClass(enum.Enum):
    RATIONAL = "rational"
    IRRATIONAL = "irrational"


class TileProvenance(enum.Enum):
    USER = "user"
    PERRON_FROBENIUS = "pf"


@dataclass(frozen=True)
class TileLengths:
    t0: QuadraticNumber
    t1: QuadraticNumber
    provenance: TileProvenance = TileProvenance.USER

    def __post_init__(self):
        object.__setattr__(self, "t0", QuadraticNumber.coerce(self.t0))
        object.__setattr__(self, "t1", QuadraticNumber.coerce(self.t1))
        if self.t0 <= 0 or self.t1 <= 0:
            raise ValueError("tile lengths must be strictly positive")

    def length(self, population) -> QuadraticNumber:
        """Tiling length ``t0 * zeros + t1 * ones``."""
        x, y = population
        return self.t0 * x + self.t1 * y

    def swapped(self) -> "TileLengths":
        return TileLengths(self.t1, self.t0, self.provenance)

    def to_json(self) -> dict:
        return {"t0": self.t0.to_json(), "t1": self.t1.to_json(),
                "provenance": self.provenance.value}


def tile_ratio_class(t: TileLengths) -> RatioClass:
    ratio = t.t1 / t.t0
    return RatioClass.RATIONAL if ratio.is_rational() else RatioClass.IRRATIONAL


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, (a, b) = a // b, (b, a % b)
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def bezout(l0: int, l1: int) -> tuple[int, int]:
    """Integers ``(r, s)`` with ``r*l0 + s*l1 == 1``, ``0 <= r < l1`` (``r = 0`` if ``l1 == 1``)."""
    if l0 < 1 or l1 < 1:
        raise ValueError("lengths must be positive")
    g, x, _ = extended_gcd(l0, l1)
    if g != 1:
        raise BezoutError(l0, l1, g)
    r = x % l1
    s = (1 - r * l0) // l1
    return r, s
