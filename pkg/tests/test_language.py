import pytest
from hypothesis import given, settings, strategies as st

from conftest import RULES
from submix.core import normalize, parse_substitution, population
from submix.language import (
    allowed_two_blocks,
    brute_force_factors,
    connector_lengths,
    excess_profile,
    factor_complexity,
    factors,
    is_factor,
)
from submix.spectral import eigen_data


def test_two_blocks(subst):
    assert allowed_two_blocks(subst("mpd")) == {"00", "01", "10", "11"}
    assert allowed_two_blocks(subst("fibonacci")) == {"00", "01", "10"}
    pd = subst("period_doubling")
    assert {pd.render(w) for w in allowed_two_blocks(pd)} == {"00", "02", "20"}


def test_two_blocks_against_long_prefix(subst):
    for name in RULES:
        s = normalize(subst(name))
        assert allowed_two_blocks(s) == brute_force_factors(s, 2, 10 ** 4)


def test_factor_examples(subst):
    assert factors(subst("dk1"), 1) == {"0", "1"}
    assert factors(subst("fibonacci"), 3) == {"001", "010", "100", "101"}
    assert factors(subst("mpd"), 2) == {"00", "01", "10", "11"}


def test_brute_force_examples(subst):
    assert brute_force_factors(subst("mpd"), 3, 10 ** 5) == factors(subst("mpd"), 3)
    assert len(brute_force_factors(subst("mpd"), 50, 50)) == 1
    assert len(brute_force_factors(subst("fibonacci"), 8, 10 ** 5)) == 9


@pytest.mark.parametrize("name", sorted(RULES))
@pytest.mark.parametrize("n", range(1, 11))
def test_factors_match_oracle(subst, name, n):
    s = subst(name)
    assert factors(s, n) == brute_force_factors(s, n, 10 ** 5)


@settings(max_examples=40, deadline=None)
@given(st.tuples(st.text("01", min_size=1, max_size=5), st.text("01", min_size=1, max_size=5)),
       st.integers(1, 12))
def test_factors_contain_any_prefix_windows(rules, n):
    from submix.core import is_primitive, substitution_from_rules
    s = substitution_from_rules({"0": rules[0], "1": rules[1]})
    if not is_primitive(s)[0]:
        return
    s = normalize(s)
    theta1 = float(eigen_data(s.matrix).theta1)
    assert brute_force_factors(s, n, 200) <= factors(s, n)
    assert factors(s, n) == brute_force_factors(s, n, max(n, int(10 * theta1 * n) + 1) * 4)


def test_membership(subst):
    assert is_factor(subst("mpd"), "000")
    assert not is_factor(subst("mpd"), "00000")
    assert not is_factor(subst("fibonacci"), "11")
    assert is_factor(subst("fibonacci"), "")


def test_period_doubling_dyadic_excess(subst):
    p = excess_profile(normalize(subst("period_doubling")), 4096)
    assert all(p.excess(2 ** k) == 1 for k in range(13))


def test_mpd_excess_two_at_special_lengths(subst):
    p = excess_profile(subst("mpd"), 5461)
    for n in range(1, 13):
        m = 2 ** (n + 2) // 3
        assert p.b[m - 1] == 2 ** (n + 1) // 3 + 1
        assert p.a[m - 1] == 2 ** (n + 1) // 3 - 1


def test_fibonacci_balanced(subst):
    p = excess_profile(subst("fibonacci"), 1000)
    assert set(p.excesses.tolist()) == {1}


@pytest.mark.parametrize("name", ["mpd", "dk1", "dk2", "gt1", "fibonacci", "period_doubling"])
def test_profile_invariants(subst, name):
    s = normalize(subst(name))
    p = excess_profile(s, 512)
    assert p.violations() == []
    # the zero frequency of u is 1/(1+gamma) with e1 = (1, gamma)
    rho = 1 / (1 + eigen_data(s.matrix).gamma)
    for n in range(1, 513):
        assert p.a[n - 1] <= rho * n <= p.b[n - 1]


@pytest.mark.parametrize("name", ["mpd", "dk1", "gt1"])
def test_profile_matches_factor_sets(subst, name):
    s = normalize(subst(name))
    p = excess_profile(s, 24)
    for n in range(1, 25):
        counts = {population(w).zeros for w in factors(s, n)}
        assert counts == set(range(p.a[n - 1], p.b[n - 1] + 1))


def test_profile_threads_agree(subst):
    s = normalize(subst("dk2"))
    assert excess_profile(s, 700, workers=4) == excess_profile(s, 700)


@pytest.mark.parametrize("name", ["mpd", "dk1", "dk2", "gt1", "period_doubling"])
def test_max_excess_grows(subst, name):
    e = excess_profile(normalize(subst(name)), 4096).excesses
    maxima = [int(e[:2 ** k].max()) for k in range(8, 13)]
    assert maxima == sorted(maxima) and maxima[-1] > maxima[0]


def test_connector_examples(subst):
    assert 0 in connector_lengths(subst("mpd"), "0", "0", 10)
    assert connector_lengths(subst("dk1"), "0", "0", 200) == set(range(201))


def _excluded_by_excess(profile, n, kmax):
    """Gaps g with excess(n + g) < excess(n): impossible when W1 has b(n) and W2 has a(n) zeros."""
    return {m - n for m in range(n, n + kmax + 1) if profile.excess(m) < profile.excess(n)}


@pytest.mark.parametrize("name, w1, w2, persistent", [
    ("dk2", "00100100", "11100111", True),
    ("dk1", "0000", "1111", False),
])
def test_connector_exclusions_follow_excess(subst, name, w1, w2, persistent):
    s = subst(name)
    n = len(w1)
    p = excess_profile(s, n + 400)
    assert population(w1).zeros == p.b[n - 1] and population(w2).zeros == p.a[n - 1]
    found = connector_lengths(s, w1, w2, 400)
    excluded = _excluded_by_excess(p, n, 400)
    assert not excluded & found
    assert bool(excluded and max(excluded) > 300) == persistent


def test_connectors_against_prefix_scan(subst):
    from submix.core import fixed_point_prefix
    s = subst("gt1")
    text = fixed_point_prefix(s, 3000)
    direct = {j - i - 1 for i in range(2000) if text[i] == "0"
              for j in range(i + 1, i + 42) if text[j] == "1"}
    assert direct <= connector_lengths(s, "0", "1", 40)


def test_oracle_keeps_input_letters():
    s = parse_substitution("0->1;1->10")
    assert brute_force_factors(s, 3, 1000) == factors(s, 3) == {"010", "011", "101", "110"}
