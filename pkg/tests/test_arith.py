import math
import time
from fractions import Fraction
from functools import reduce

import pytest
from hypothesis import given, strategies as st

from submix.arith import (
    BezoutError,
    RatioClass,
    SingularMatrixError,
    TileLengths,
    bezout,
    determinant,
    gcd_condition,
    length_vector,
    prime_factors,
    tile_ratio_class,
)
from submix.quadratic import QuadraticNumber as Q


def test_period_doubling_fails_at_2_1():
    cert = gcd_condition([[1, 2], [1, 0]])
    assert not cert.holds
    assert (cert.failing_prime, cert.failing_power) == (2, 1)


def test_mpd_orbit_fixed_at_ones():
    cert = gcd_condition([[1, 1], [2, 0]])
    assert cert.holds
    (orbit,) = cert.orbits
    assert orbit.prime == 2 and orbit.vectors == ((1, 1),) and orbit.repeat_from == 0


def test_dekking_keane_holds():
    assert gcd_condition([[2, 2], [1, 3]]).holds


def test_rule_lengths_checked():
    assert gcd_condition([[1, 1], [2, 0]], rule_lengths=(3, 1)).holds
    with pytest.raises(ValueError):
        gcd_condition([[1, 1], [2, 0]], rule_lengths=(2, 2))


def test_singular():
    with pytest.raises(SingularMatrixError):
        gcd_condition([[1, 1], [1, 1]])


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3))
def test_bareiss_matches_cofactor_expansion(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    assert determinant(m) == a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@given(st.integers(1, 10 ** 6))
def test_prime_factors(n):
    ps = prime_factors(n)
    rest = n
    for p in ps:
        assert all(p % q for q in range(2, int(p ** .5) + 1))
        while rest % p == 0:
            rest //= p
    assert rest == 1


square_or_cube = st.integers(2, 3).flatmap(
    lambda m: st.lists(st.lists(st.integers(0, 6), min_size=m, max_size=m), min_size=m, max_size=m))


@given(square_or_cube)
def test_gcd_condition_matches_direct_lengths(m):
    if determinant(m) == 0:
        return
    direct = all(reduce(math.gcd, length_vector(m, n)) == 1 for n in range(1, 13))
    cert = gcd_condition(m)
    if cert.holds:
        assert direct
    else:
        p, n = cert.failing_prime, cert.failing_power
        assert all(x % p == 0 for x in length_vector(m, n))
        if n <= 12:
            assert not direct
    for orbit in cert.orbits:
        assert len(orbit.vectors) <= orbit.prime ** len(m)


def test_gcd_certificate_is_fast():
    for m in ([[1, 2], [1, 0]], [[1, 1], [2, 0]], [[2, 2], [1, 3]], [[2, 1], [1, 4]]):
        t = time.perf_counter()
        gcd_condition(m)
        assert time.perf_counter() - t < 0.01


def test_tile_ratio_classes():
    assert tile_ratio_class(TileLengths(1, 2)) is RatioClass.RATIONAL
    assert tile_ratio_class(TileLengths(1, Q.sqrt(2))) is RatioClass.IRRATIONAL
    assert tile_ratio_class(TileLengths(1, 1 + Q.sqrt(2))) is RatioClass.IRRATIONAL
    assert tile_ratio_class(TileLengths(Q.sqrt(2), 2 * Q.sqrt(2))) is RatioClass.RATIONAL
    with pytest.raises(ValueError):
        TileLengths(0, 1)
    with pytest.raises(ValueError):
        TileLengths(Fraction(1, 2), 1 - Q.sqrt(2))


def test_bezout_examples():
    assert bezout(3, 5) == (2, -1)
    assert bezout(3, 1) == (0, 1)
    with pytest.raises(BezoutError) as err:
        bezout(2, 4)
    assert err.value.gcd == 2


@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_bezout_identity(l0, l1):
    if math.gcd(l0, l1) != 1:
        with pytest.raises(BezoutError):
            bezout(l0, l1)
        return
    r, s = bezout(l0, l1)
    assert r * l0 + s * l1 == 1
    assert abs(r) <= l1 and abs(s) <= l0
