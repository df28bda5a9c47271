import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from submix.core import fixed_point_prefix, normalize, population
from submix.geometry import (
    OutOfRangeError,
    SpectralClassError,
    accordion_decompose,
    bound_check,
    chord,
    classify_against_path,
    gamma_path,
    ivt_search,
    phi_strip,
    width,
)
from submix.language import excess_profile, is_factor
from submix.quadratic import QuadraticNumber as Q
from submix.spectral import eigen_data, project


@pytest.fixture(scope="module")
def mpd_strip(subst):
    return phi_strip(excess_profile(subst("mpd"), 2048))


def test_path_basics(subst):
    path = gamma_path(subst("mpd"), 64)
    assert path[0] == (0, 0) and path[1] == (1, 0) and path[3] == (1, 2)
    steps = set(zip(np.diff(path.x).tolist(), np.diff(path.y).tolist()))
    assert steps <= {(1, 0), (0, 1)}


@pytest.mark.parametrize("name", ["mpd", "dk1", "dk2", "gt1", "fibonacci"])
def test_path_inside_strip(subst, name):
    s = normalize(subst(name))
    strip = phi_strip(excess_profile(s, 1024))
    assert all(strip.contains(pt) for pt in gamma_path(s, 1024).points)


def test_strip_examples(subst, mpd_strip):
    fib = phi_strip(excess_profile(subst("fibonacci"), 200))
    assert all(lo[0] - up[0] == 1 for up, lo in zip(fib.upper[1:], fib.lower[1:]))
    from submix.language import brute_force_factors
    counts = {w.count("0") for w in brute_force_factors(subst("mpd"), 16, 10 ** 5)}
    inside = {x for x in range(17) if mpd_strip.contains((x, 16 - x))}
    assert inside == counts == {6, 7, 8, 9, 10}
    assert mpd_strip.upper[1] == (0, 1) and mpd_strip.lower[1] == (1, 0)


def test_width_at_integer_levels(subst, mpd_strip):
    p = excess_profile(subst("mpd"), 2048)
    for n in range(1, 2049):
        (ux, uy), (lx, ly) = chord(mpd_strip, 1, n)
        assert (lx - ux, uy - ly) == (p.excess(n), p.excess(n))
        assert width(mpd_strip, 1, n) == pytest.approx(math.sqrt(2) * p.excess(n), rel=1e-12)


def test_width_pinches_at_origin(mpd_strip):
    assert width(mpd_strip, 1, Fraction(1, 10 ** 6)) < 1e-5
    assert width(mpd_strip, 1, 0) == 0
    with pytest.raises(OutOfRangeError):
        width(mpd_strip, 1, 10 ** 6)


def test_widths_in_two_directions_are_comparable(mpd_strip):
    ratios = [width(mpd_strip, 1, r) / width(mpd_strip, math.sqrt(2), r)
              for r in np.linspace(8, 1000, 400)]
    assert 0.25 <= min(ratios) and max(ratios) <= 4


def test_accordion_shallow(subst):
    s = subst("mpd")
    d = accordion_decompose(s, 1, 2)        # "11" inside the image 011
    assert d.k == 1 and len(d.parts()) == 1
    assert d.reconstruct(s) == "11"


def test_accordion_random_occurrences(subst):
    s = subst("mpd")
    rng = random.Random(7)
    u = fixed_point_prefix(s, 6000)
    m = s.matrix
    for _ in range(1000):
        j, n = rng.randrange(0, 4000), rng.randrange(0, 2000)
        d = accordion_decompose(s, j, n)
        word = u[j:j + n]
        assert d.reconstruct(s) == word
        assert d.population(s) == tuple(population(word))
        assert all(len(w) < s.max_rule_length for _, w in d.parts())
        assert len(d.parts()) <= 2 * d.k + 1


def test_bound_check_gt1(subst):
    s = subst("gt1")
    rep = bound_check(s, excess_profile(s, 4096))
    assert abs(rep.slope - rep.alpha) <= 0.15
    assert rep.c1 > 0 and rep.upper_bound_holds
    with pytest.raises(SpectralClassError):
        bound_check(subst("mpd"), excess_profile(subst("mpd"), 64))


def test_supertile_growth_bands(subst):
    s = subst("gt1")
    sd = eigen_data(s.matrix)
    t1, t2 = float(sd.theta1), abs(float(sd.theta2))
    for letter in (0, 1):
        along, across = [], []
        for k in range(1, 21):
            v = (s.matrix ** k).column(letter)
            along.append(v[0] / t1 ** k)
            across.append(abs(float(project(v, sd.gamma)[1])) / t2 ** k)
        assert min(along) > 0 and max(along) / min(along) < 4
        assert min(across) > 0 and max(across) / min(across) < 4


def test_ivt_examples(subst):
    s = subst("mpd")
    res = ivt_search(s, (1, 1), 200)
    assert res.found and res.z == (0, 0)
    assert not ivt_search(s, (5, 0), 2000).found
    on_path = gamma_path(s, 10)[7]
    assert ivt_search(s, on_path, 50).z == (0, 0)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 30), st.integers(0, 30))
def test_ivt_soundness(wx, wy):
    from submix.core import parse_substitution
    s = parse_substitution("0->011;1->0")
    res = ivt_search(s, (wx, wy), 600)
    if res.found:
        w = res.word(s)
        assert tuple(population(w)) == (wx, wy) and is_factor(s, w)
    elif res.seen_below and res.seen_above:
        pytest.fail("sides changed without a landing")


def test_classify_against_path(subst):
    path = gamma_path(subst("mpd"), 20)
    assert classify_against_path(path, path[5]) == 0
    x, y = path[5]
    assert classify_against_path(path, (x - 1, y + 1)) == 1
    assert classify_against_path(path, (x + 1, y - 1)) == -1
