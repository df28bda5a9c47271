import itertools

import numpy as np
import pytest

from submix.arith import TileLengths
from submix.core import (
    Periodicity,
    check_aperiodic,
    is_primitive,
    normalize,
    parse_substitution,
    power,
    substitution_from_rules,
)
from submix.language import excess_profile
from submix.mixing import (
    PeriodicSubstitutionError,
    Verdict,
    bounded_excess_certificate,
    classify_R,
    classify_Z,
    meyer_diagnostic,
    point_set,
    psi_density_scan,
    report,
    tile_endpoints,
)
from submix.quadratic import QuadraticNumber as Q

SQRT2 = Q.sqrt(2)
IRRATIONAL = TileLengths(1, SQRT2)


def test_z_verdicts(subst):
    gt1 = classify_Z(subst("gt1"))
    assert gt1.verdict is Verdict.MIXING
    fib = classify_Z(subst("fibonacci"))
    assert fib.verdict is Verdict.NOT_MIXING and fib.basis == "second-eigenvalue-inside-unit-circle"
    pd = classify_Z(subst("period_doubling"))
    assert pd.verdict is Verdict.NOT_MIXING and pd.basis == "length-gcd-condition-fails"


def test_r_verdicts(subst):
    mpd = classify_R(subst("mpd"), IRRATIONAL)
    assert mpd.verdict is Verdict.UNDETERMINED
    ev = mpd.evidence
    assert ev.tail_min <= 2
    p = excess_profile(subst("mpd"), 4096)
    assert p.excess(2 ** 13 // 3) == 2 == ev.tail_min
    assert classify_R(subst("gt1"), TileLengths(1, 1 + SQRT2)).verdict is Verdict.MIXING
    for name in ("mpd", "gt1", "fibonacci", "dk1"):
        v = classify_R(subst(name), TileLengths(2, 1), N=64)
        assert v.verdict is Verdict.NOT_MIXING and v.basis == "rational-tile-ratio"
    assert classify_R(subst("fibonacci"), IRRATIONAL).verdict is Verdict.NOT_MIXING
    pd = classify_R(subst("period_doubling"), IRRATIONAL)
    assert pd.verdict is Verdict.NOT_MIXING and pd.basis == "excess-liminf-finite"


def test_eq1_never_hard_classified_without_proof(subst):
    for name in ("mpd", "dk1", "dk2"):
        assert classify_Z(subst(name)).verdict is Verdict.UNDETERMINED
        assert classify_R(subst(name), IRRATIONAL).verdict is Verdict.UNDETERMINED


def test_evidence_separates_dekking_keane(subst):
    one = classify_Z(subst("dk1")).evidence
    two = classify_Z(subst("dk2")).evidence
    assert one.tail_min >= 4 and two.tail_min <= 3


def test_sup_above_tail_min_never_mixing(subst):
    for name in ("mpd", "dk1", "dk2", "period_doubling", "fibonacci", "gt1"):
        v = classify_Z(subst(name), N=1024)
        if v.evidence is not None and v.evidence.sup_exceeds_tail_min:
            assert v.verdict is not Verdict.MIXING


def test_z_verdict_stable_under_squaring(subst):
    s = subst("gt1")
    assert classify_Z(power(s, 2)).verdict is classify_Z(s).verdict is Verdict.MIXING


def test_periodic_rejected():
    with pytest.raises(PeriodicSubstitutionError):
        classify_Z(parse_substitution("0->010;1->101"))


def test_undetermined_aperiodicity_downgrades(subst, monkeypatch):
    from submix import mixing
    from submix.core import AperiodicityVerdict
    monkeypatch.setattr(mixing, "check_aperiodic",
                        lambda s, depth=64: AperiodicityVerdict(Periodicity.UNDETERMINED))
    v = classify_Z(subst("gt1"))
    assert v.verdict is Verdict.UNDETERMINED and v.basis == "aperiodicity-undetermined"
    assert "would be Mixing" in v.warnings


def _constant_length_shared_prefix():
    for L in (2, 3, 4):
        for head in map("".join, itertools.product("01", repeat=L - 1)):
            for x, y in itertools.permutations("01"):
                s = substitution_from_rules({"0": head + x, "1": head + y})
                if is_primitive(s)[0]:
                    yield s


def test_bounded_excess_certificate_is_sound():
    checked = 0
    for s in _constant_length_shared_prefix():
        cert = bounded_excess_certificate(s)
        n = normalize(s)
        if check_aperiodic(n).kind is not Periodicity.APERIODIC:
            continue
        L = len(s.rule0)
        p = excess_profile(n, 2048)
        levels = [L ** k for k in range(1, 12) if L ** k <= 2048]
        if cert is not None:
            checked += 1
            assert all(p.excess(m) == 1 for m in levels)
        for m in levels:
            # zero counts at length L*m are an affine image of those at length m
            if L * m <= 2048:
                assert p.excess(L * m) == abs(s.matrix.m00 - s.matrix.m01) * p.excess(m)
    assert checked >= 2


def test_psi_scan_values_are_exact(subst):
    t = TileLengths(1, 1 + SQRT2)
    scan = psi_density_scan(subst("gt1"), t, "0", "0", 128)
    assert list(scan.values) == sorted(scan.values, key=float)
    assert len(set(scan.values)) == len(scan.values)
    for pop, value in zip(scan.populations, scan.values):
        assert value == t.t0 * pop[0] + t.t1 * pop[1]
    assert all(v >= 0 for v in scan.values)


def test_psi_scan_gt1_gaps_shrink(subst):
    t = TileLengths(1, 1 + SQRT2)
    gaps = [psi_density_scan(subst("gt1"), t, "0", "0", 2 ** k).max_gap_tail for k in range(7, 11)]
    assert all(b <= a for a, b in zip(gaps, gaps[1:])) and gaps[-1] < gaps[0]


def test_psi_scan_mpd_gaps_persist(subst):
    gaps = [psi_density_scan(subst("mpd"), IRRATIONAL, "0", "0", 2 ** k).max_gap_tail
            for k in range(7, 11)]
    assert min(gaps) >= 0.5


def test_psi_scan_tiny_radius(subst):
    scan = psi_density_scan(subst("mpd"), TileLengths(2, 3), "0", "0", 1)
    assert scan.values == ()


def test_point_set_is_binary(subst):
    word, points = tile_endpoints(subst("mpd"), IRRATIONAL, 200)
    gaps = {b - a for a, b in zip(points, points[1:])}
    assert gaps == {Q(1), SQRT2}
    ps = point_set(subst("mpd"), IRRATIONAL, 200)
    brute = {b - a for a in ps.points for b in ps.points if b >= a}
    assert set(ps.differences) == brute


def test_meyer_integer_lattice(subst):
    rep = meyer_diagnostic(subst("mpd"), TileLengths(1, 1), 256, 1e-3)
    assert rep.separation_violations == () and rep.min_separation == 1


def test_meyer_mpd_has_tail_gap(subst):
    rep = meyer_diagnostic(subst("mpd"), IRRATIONAL, 2 ** 10, 1e-3)
    assert rep.tail_gaps and rep.largest_tail_gap[1] - rep.largest_tail_gap[0] >= 0.1


def test_report_contents(subst):
    mpd = report(subst("mpd"), N=512)
    assert mpd["spectral"]["theta2_class"] == "EQ1"
    assert mpd["gcd"]["holds"] and mpd["Z"]["verdict"] == "UndeterminedEvidence"
    assert "R" not in mpd and "tiles" not in mpd
    fib = report(subst("fibonacci"), IRRATIONAL, N=256)
    assert fib["Z"]["verdict"] == fib["R"]["verdict"] == "NotMixing"
    assert fib["schema"] == 1
