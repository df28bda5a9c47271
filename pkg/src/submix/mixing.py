"""Mixing verdicts for the shift and the tiling flow, plus density and Meyer scans."""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arith import (
    GcdCertificate,
    RatioClass,
    TileLengths,
    gcd_condition,
    tile_ratio_class,
)
from .core import (
    Periodicity,
    Substitution,
    SubstitutionError,
    Word,
    check_aperiodic,
    fixed_point_prefix,
    is_primitive,
    normalize,
)
from .language import ExcessProfile, connector_population_vectors, excess_profile
from .quadratic import QuadraticNumber
from .spectral import NotPrimitiveError, Theta2Class, eigen_data

log = logging.getLogger(__name__)

DEFAULT_N = 4096


class PeriodicSubstitutionError(ValueError):
    pass


class Verdict(enum.Enum):
    MIXING = "Mixing"
    NOT_MIXING = "NotMixing"
    UNDETERMINED = "UndeterminedEvidence"


@dataclass(frozen=True)
class ExcessEvidence:
    """Finite summaries of the excess b(n) - a(n) used when |theta2| = 1."""

    N: int
    tail_window: tuple[int, int]
    tail_min: int
    tail_min_levels: tuple[int, ...]          # first few n in the tail window attaining tail_min
    sup: int
    window_mins: tuple[tuple[int, int, int], ...]   # (lo, hi, min excess on [lo, hi]) for dyadic windows
    running_max: tuple[tuple[int, int], ...]        # (2^k, max excess for n <= 2^k)

    @property
    def sup_exceeds_tail_min(self) -> bool:
        return self.sup > self.tail_min

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "tail_window": list(self.tail_window),
            "tail_min": self.tail_min,
            "tail_min_levels": list(self.tail_min_levels),
            "sup": self.sup,
            "sup_exceeds_tail_min": self.sup_exceeds_tail_min,
            "window_mins": [list(w) for w in self.window_mins],
            "running_max": [list(r) for r in self.running_max],
        }


def excess_evidence(profile: ExcessProfile) -> ExcessEvidence:
    e = profile.excesses
    N = profile.N
    lo = max(1, N // 2)
    tail = e[lo - 1:N]
    tail_min = int(tail.min())
    levels = tuple(int(i) + lo for i in np.flatnonzero(tail == tail_min)[:16])
    windows = []
    running = []
    k = 1
    while k <= N:
        hi = min(2 * k, N)
        windows.append((k, hi, int(e[k - 1:hi].min())))
        running.append((k, int(e[:k].max())))
        k *= 2
    return ExcessEvidence(N, (lo, N), tail_min, levels, int(e.max()),
                          tuple(windows), tuple(running))


@dataclass(frozen=True)
class MixingVerdict:
    action: str                 # "Z" (shift) or "R" (tiling flow)
    verdict: Verdict
    basis: str
    certificate: dict = field(default_factory=dict)
    evidence: Optional[ExcessEvidence] = None
    warnings: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {"action": self.action, "verdict": self.verdict.value,
               "basis": self.basis, "certificate": self.certificate}
        if self.evidence is not None:
            out["evidence"] = self.evidence.to_json()
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def bounded_excess_certificate(s: Substitution) -> Optional[dict]:
    """Exact proof that ``liminf (b(n) - a(n)) <= b(1) - a(1) = 1``, when one exists.

    If every image has the same length L and all images share their first
    L - 1 letters, a word of length L*n is a shift of some ``s(W)`` whose
    population equals ``M l(W)``.  Zero counts at length L*n are then the
    image of those at length n under ``x -> m01*n + (m00 - m01)*x`` and
    ``m00 - m01`` is the second eigenvalue, so with |theta2| = 1 the excess
    at every length ``L**k`` equals 1.  Reversing all words preserves the
    excess, so a shared suffix of length L - 1 works as well.
    """
    L = len(s.rule0)
    if len(s.rule1) != L:
        return None
    if s.matrix.m00 - s.matrix.m01 not in (1, -1):
        return None
    shared = None
    if s.rule0[:L - 1] == s.rule1[:L - 1]:
        shared = "prefix"
    elif s.rule0[1:] == s.rule1[1:]:
        shared = "suffix"
    if shared is None:
        return None
    return {"rule_length": L, "shared": shared, "theta2": s.matrix.m00 - s.matrix.m01,
            "levels": f"{L}^k", "excess_at_levels": 1}


@dataclass
class _Analysis:
    original: Substitution
    normal: Substitution
    theta2_class: Theta2Class
    det: int
    gcd: Optional[GcdCertificate]
    aperiodic: Periodicity


def _analyse(s: Substitution, depth: int) -> _Analysis:
    if not is_primitive(s)[0]:
        raise NotPrimitiveError("substitution is not primitive")
    normal = normalize(s)
    verdict = check_aperiodic(normal, depth)
    if verdict.kind is Periodicity.PERIODIC:
        raise PeriodicSubstitutionError(f"fixed point is periodic with period {verdict.period}")
    sd = eigen_data(s.matrix)
    gcd = gcd_condition(s.matrix) if sd.det else None
    return _Analysis(s, normal, sd.theta2_class, sd.det, gcd, verdict.kind)


def _downgrade(v: MixingVerdict, a: _Analysis) -> MixingVerdict:
    if a.aperiodic is Periodicity.APERIODIC:
        return v
    msg = "aperiodicity undetermined; verdict withheld"
    log.warning(msg)
    return MixingVerdict(v.action, Verdict.UNDETERMINED, "aperiodicity-undetermined",
                         v.certificate, v.evidence, v.warnings + (msg, f"would be {v.verdict.value}"))


def classify_Z(s: Substitution, N: int = DEFAULT_N, depth: int = 64,
               profile: Optional[ExcessProfile] = None) -> MixingVerdict:
    """Topological mixing of the shift action.

    Exact when |theta2| != 1 or when the length GCD condition fails;
    otherwise the excess profile up to ``N`` is attached as evidence.
    """
    a = _analyse(s, depth)
    cert = {"theta2_class": a.theta2_class.value}
    if a.gcd is not None:
        cert["gcd"] = a.gcd.to_json()
    if a.gcd is not None and not a.gcd.holds:
        v = MixingVerdict("Z", Verdict.NOT_MIXING, "length-gcd-condition-fails", cert)
    elif a.theta2_class is Theta2Class.LT1:
        v = MixingVerdict("Z", Verdict.NOT_MIXING, "second-eigenvalue-inside-unit-circle", cert)
    elif a.theta2_class is Theta2Class.GT1:
        v = MixingVerdict("Z", Verdict.MIXING,
                          "second-eigenvalue-outside-unit-circle-and-gcd-holds", cert)
    else:
        profile = profile or excess_profile(a.normal, N)
        evidence = excess_evidence(profile)
        bounded = bounded_excess_certificate(s)
        if bounded is not None and evidence.sup > 1:
            cert["bounded_excess"] = bounded
            v = MixingVerdict("Z", Verdict.NOT_MIXING, "excess-liminf-below-sup", cert, evidence)
        else:
            v = MixingVerdict("Z", Verdict.UNDETERMINED, "second-eigenvalue-on-unit-circle",
                              cert, evidence)
    return _downgrade(v, a)


def classify_R(s: Substitution, t: TileLengths, N: int = DEFAULT_N, depth: int = 64,
               profile: Optional[ExcessProfile] = None) -> MixingVerdict:
    """Topological mixing of the tiling flow with tile lengths ``t``."""
    a = _analyse(s, depth)
    ratio = tile_ratio_class(t)
    cert = {"theta2_class": a.theta2_class.value, "tile_ratio": ratio.value,
            "tiles": t.to_json()}
    if ratio is RatioClass.RATIONAL:
        v = MixingVerdict("R", Verdict.NOT_MIXING, "rational-tile-ratio", cert)
    elif a.theta2_class is Theta2Class.LT1:
        v = MixingVerdict("R", Verdict.NOT_MIXING, "second-eigenvalue-inside-unit-circle", cert)
    elif a.theta2_class is Theta2Class.GT1:
        v = MixingVerdict("R", Verdict.MIXING,
                          "second-eigenvalue-outside-unit-circle-and-irrational-ratio", cert)
    else:
        profile = profile or excess_profile(a.normal, N)
        bounded = bounded_excess_certificate(s)
        if bounded is not None:
            cert["bounded_excess"] = bounded
            v = MixingVerdict("R", Verdict.NOT_MIXING, "excess-liminf-finite", cert,
                              excess_evidence(profile))
        else:
            v = MixingVerdict("R", Verdict.UNDETERMINED, "second-eigenvalue-on-unit-circle",
                              cert, excess_evidence(profile))
    return _downgrade(v, a)


def to_normal_frame(s: Substitution, t: Optional[TileLengths] = None,
                    words: tuple[Word, ...] = ()):
    """Normalize ``s`` and carry tile lengths and words along a letter swap."""
    normal = normalize(s)
    swapped = (normal.normalization.swapped
               != (s.normalization.swapped if s.normalization else False))
    if swapped:
        swap = str.maketrans("01", "10")
        words = tuple(w.translate(swap) for w in words)
        t = t.swapped() if t is not None else None
    return normal, t, words


def _max_gap(values: np.ndarray, lo: float, hi: float) -> tuple[float, float, float]:
    """Largest empty interval of ``[lo, hi]`` between sorted ``values``."""
    inside = values[(values >= lo) & (values <= hi)]
    points = np.concatenate([[lo], inside, [hi]])
    gaps = np.diff(points)
    i = int(np.argmax(gaps))
    return float(gaps[i]), float(points[i]), float(points[i + 1])


@dataclass(frozen=True)
class DensityScan:
    """Tiling lengths ``|W1 V|`` over factors ``W1 V W2`` up to radius R."""

    R: float
    populations: tuple[tuple[int, int], ...]   # sorted by tiling length
    values: tuple[QuadraticNumber, ...]
    max_gap_tail: float
    gap_interval: tuple[float, float]

    def to_json(self) -> dict:
        return {"R": self.R, "count": len(self.values),
                "max_gap_tail": self.max_gap_tail, "gap_interval": list(self.gap_interval),
                "values": [str(v.to_decimal(12)) for v in self.values]}


def psi_density_scan(s: Substitution, t: TileLengths, w1: Word, w2: Word,
                     R) -> DensityScan:
    normal, t, (w1, w2) = to_normal_frame(s, t, (w1, w2))
    t0, t1 = float(t.t0), float(t.t1)
    max_len = int(float(R) / min(t0, t1)) + 1
    pops = connector_population_vectors(normal, w1, w2, max_len)
    exact = {t.length(p): p for p in pops}
    keep = sorted((float(v), v, p) for v, p in exact.items() if v <= R)
    floats = np.array([f for f, _, _ in keep])
    gap, glo, ghi = _max_gap(floats, float(R) / 2, float(R))
    return DensityScan(float(R), tuple(p for _, _, p in keep), tuple(v for _, v, _ in keep),
                       gap, (glo, ghi))


@dataclass(frozen=True)
class PointSet:
    """Tile endpoints of the tiling of [0, R] read off the fixed point."""

    points: tuple[QuadraticNumber, ...]
    differences: tuple[QuadraticNumber, ...]   # distinct values of the difference set in [0, R]

    def gaps(self) -> set[QuadraticNumber]:
        return {b - a for a, b in zip(self.points, self.points[1:])}


def tile_endpoints(s: Substitution, t: TileLengths, R) -> tuple[Word, list[QuadraticNumber]]:
    normal, t, _ = to_normal_frame(s, t)
    tmin = min(float(t.t0), float(t.t1))
    letters = int(float(R) / tmin) + 2
    u = fixed_point_prefix(normal, letters)
    points = [QuadraticNumber(0)]
    for c in u:
        nxt = points[-1] + (t.t0 if c == "0" else t.t1)
        if nxt > R:
            break
        points.append(nxt)
    return u[:len(points) - 1], points


def point_set(s: Substitution, t: TileLengths, R) -> PointSet:
    """Endpoints and their distinct differences, built from window populations.

    Within one word, window zero counts for a fixed length move by at most
    one per shift, so every count between the extremes occurs.
    """
    word, points = tile_endpoints(s, t, R)
    _, t, _ = to_normal_frame(s, t)
    bits = np.frombuffer(word.encode("ascii"), dtype=np.uint8) == ord("0")
    zeros = np.concatenate([[0], np.cumsum(bits)])
    diffs = {QuadraticNumber(0)}
    for n in range(1, len(word) + 1):
        counts = zeros[n:] - zeros[:-n]
        for x in range(int(counts.min()), int(counts.max()) + 1):
            v = t.length((x, n - x))
            if v <= R:
                diffs.add(v)
    return PointSet(tuple(points), tuple(sorted(diffs, key=float)))


@dataclass(frozen=True)
class MeyerReport:
    R: float
    eps: float
    difference_count: int
    min_separation: float
    separation_violations: tuple[tuple[str, str], ...]   # close pairs, decimal strings
    largest_tail_gap: tuple[float, float]
    tail_gaps: tuple[tuple[float, float], ...]           # empty intervals in [R/2, R] of width >= gap_threshold

    def to_json(self) -> dict:
        return {"R": self.R, "eps": self.eps, "difference_count": self.difference_count,
                "min_separation": self.min_separation,
                "separation_violations": [list(p) for p in self.separation_violations],
                "largest_tail_gap": list(self.largest_tail_gap),
                "tail_gaps": [list(g) for g in self.tail_gaps]}


def meyer_diagnostic(s: Substitution, t: TileLengths, R, eps: float,
                     gap_threshold: float = 0.1) -> MeyerReport:
    """Look for near-coincidences and empty stretches in the difference set."""
    ps = point_set(s, t, R)
    values = ps.differences
    floats = np.array([float(v) for v in values])
    close = []
    seps = np.diff(floats)
    for i in np.flatnonzero(seps < eps):
        a, b = values[i], values[i + 1]
        if a != b:
            close.append((str(a.to_decimal(12)), str(b.to_decimal(12))))
    lo, hi = float(R) / 2, float(R)
    inside = np.concatenate([[lo], floats[(floats >= lo) & (floats <= hi)], [hi]])
    gaps = np.diff(inside)
    order = np.argsort(-gaps, kind="stable")
    largest = (float(inside[order[0]]), float(inside[order[0] + 1]))
    tail = tuple((float(inside[i]), float(inside[i + 1]))
                 for i in sorted(int(j) for j in np.flatnonzero(gaps >= gap_threshold)))
    return MeyerReport(float(R), eps, len(values),
                       float(seps.min()) if seps.size else float("inf"),
                       tuple(close), largest, tail)


def report(s: Substitution, t: Optional[TileLengths] = None, N: int = DEFAULT_N,
           depth: int = 64, figures: Optional[dict] = None) -> dict:
    """Everything known about ``s`` as a JSON-ready dict (deterministic key order)."""
    from .geometry import SpectralClassError, bound_check

    ok, k = is_primitive(s)
    if not ok:
        raise NotPrimitiveError("substitution is not primitive")
    normal = normalize(s)
    aperiodic = check_aperiodic(normal, depth)
    if aperiodic.kind is Periodicity.PERIODIC:
        raise PeriodicSubstitutionError(f"fixed point is periodic with period {aperiodic.period}")
    sd = eigen_data(s.matrix)
    profile = excess_profile(normal, N)
    out: dict = {
        "schema": 1,
        "substitution": str(s),
        "letters": list(s.letters),
        "normalized": {"rule0": normal.rule0, "rule1": normal.rule1,
                       **normal.normalization.to_json()},
        "matrix": s.matrix.rows(),
        "primitive": {"holds": True, "power": k},
        "aperiodicity": aperiodic.to_json(),
        "spectral": sd.to_json(),
        "gcd": gcd_condition(s.matrix).to_json() if sd.det else None,
        "excess": {"N": N, "max": int(profile.excesses.max()),
                   "evidence": excess_evidence(profile).to_json()},
    }
    try:
        out["excess"]["bounds"] = bound_check(normal, profile).to_json()
    except SpectralClassError:
        pass
    out["Z"] = classify_Z(s, N, depth, profile).to_json()
    if t is not None:
        out["tiles"] = t.to_json()
        out["R"] = classify_R(s, t, N, depth, profile).to_json()
    if figures:
        out["figures"] = dict(sorted(figures.items()))
    return out


__all__ = [
    "bounded_excess_certificate", "DensityScan", "ExcessEvidence", "MeyerReport", "MixingVerdict", "PeriodicSubstitutionError",
    "PointSet", "Verdict", "classify_R", "classify_Z", "excess_evidence", "meyer_diagnostic",
    "point_set", "psi_density_scan", "report", "SubstitutionError",
]
