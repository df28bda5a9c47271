"""Population geometry: the prefix path, the factor strip and related checks."""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Optional, Union

import numpy as np

from .core import Substitution, Word, fixed_point_prefix, population
from .language import ExcessProfile
from .spectral import Theta2Class, eigen_data, project

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class PopulationPath:
    """Population vectors of the prefixes ``u[:j]``, ``j = 0..J``."""

    x: np.ndarray
    y: np.ndarray

    @property
    def J(self) -> int:
        return len(self.x) - 1

    @property
    def points(self) -> list[tuple[int, int]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    def __getitem__(self, j: int) -> tuple[int, int]:
        return (int(self.x[j]), int(self.y[j]))


def _zero_prefix_counts(word: Word) -> np.ndarray:
    bits = np.frombuffer(word.encode("ascii"), dtype=np.uint8) == ord("0")
    out = np.zeros(len(word) + 1, dtype=np.int64)
    np.cumsum(bits, out=out[1:])
    return out


def gamma_path(s: Substitution, J: int) -> PopulationPath:
    if J < 0:
        raise ValueError("J must be >= 0")
    x = _zero_prefix_counts(fixed_point_prefix(s, J))
    y = np.arange(J + 1, dtype=np.int64) - x
    return PopulationPath(x, y)


@dataclass(frozen=True)
class PhiStrip:
    """Envelope polylines of the factor strip, both anchored at the origin.

    ``upper[n] = (a(n), n - a(n))`` (fewest zeros) and
    ``lower[n] = (b(n), n - b(n))`` for ``n = 0..N``.
    """

    N: int
    upper: tuple[tuple[int, int], ...]
    lower: tuple[tuple[int, int], ...]

    def contains(self, point: tuple[int, int]) -> bool:
        x, y = point
        n = x + y
        if n > self.N or x < 0 or y < 0:
            return False
        return self.upper[n][0] <= x <= self.lower[n][0]


def phi_strip(profile: ExcessProfile) -> PhiStrip:
    upper = [(0, 0)] + [(a, n - a) for n, a in enumerate(profile.a, start=1)]
    lower = [(0, 0)] + [(b, n - b) for n, b in enumerate(profile.b, start=1)]
    return PhiStrip(profile.N, tuple(upper), tuple(lower))


class OutOfRangeError(ValueError):
    pass


def _crossing(poly, gamma, r):
    """Point where a staircase polyline meets ``x + gamma*y = r``.

    Along such a polyline ``x + gamma*y`` increases strictly, so there is a
    single crossing, found by bisection on the vertex levels.
    """
    levels = [x + gamma * y for x, y in poly]
    i = bisect_right(levels, r) - 1
    if levels[i] == r:
        return poly[i]
    (x0, y0), (x1, y1) = poly[i], poly[i + 1]
    t = (r - levels[i]) / (levels[i + 1] - levels[i])
    return (x0 + t * (x1 - x0), y0 + t * (y1 - y0))


def covered_level(strip: PhiStrip, gamma) -> Number:
    return min(x + gamma * y for x, y in (strip.upper[-1], strip.lower[-1]))


def chord(strip: PhiStrip, gamma, r):
    """Endpoints of the strip's chord on ``x + gamma*y = r`` (upper first).

    Exact when ``gamma`` and ``r`` are ints or Fractions.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if r < 0 or r > covered_level(strip, gamma):
        raise OutOfRangeError(f"level {r} outside the covered range")
    return _crossing(strip.upper, gamma, r), _crossing(strip.lower, gamma, r)


def width(strip: PhiStrip, gamma, r) -> float:
    """Length of the intersection of the strip with the line ``x + gamma*y = r``."""
    (ux, uy), (lx, ly) = chord(strip, gamma, r)
    return math.hypot(float(lx - ux), float(ly - uy))


@dataclass(frozen=True)
class AccordionDecomposition:
    """Supertile decomposition of one occurrence ``u[position:position+length]``.

    The word equals ``s_0 S(s_1) ... S^{k-1}(s_{k-1}) S^{k-1}(core)
    S^{k-1}(p_{k-1}) ... S(p_1) p_0`` where S is the substitution,
    ``s_t`` is a proper suffix and ``p_t`` a proper prefix of an image
    ``S(a)``, and ``core`` is a proper infix of one image (often empty).
    """

    position: int
    length: int
    suffixes: tuple[Word, ...]
    prefixes: tuple[Word, ...]
    core: Word

    @property
    def k(self) -> int:
        return len(self.suffixes)

    def parts(self) -> list[tuple[int, Word]]:
        """(level, part) pairs in left-to-right order, empty parts skipped."""
        k = self.k
        out = [(t, w) for t, w in enumerate(self.suffixes)]
        out.append((k - 1, self.core))
        out += [(t, self.prefixes[t]) for t in range(k - 1, -1, -1)]
        return [(t, w) for t, w in out if w]

    def reconstruct(self, s: Substitution) -> Word:
        def lift(word, t):
            for _ in range(t):
                word = s.apply(word)
            return word
        return "".join(lift(w, t) for t, w in self.parts())

    def population(self, s: Substitution) -> tuple[int, int]:
        """``sum M^t l(part)`` over the parts; equals the occurrence's population."""
        m = s.matrix
        total = (0, 0)
        for t, w in self.parts():
            v = tuple(population(w))
            mt = m ** t
            v = mt @ v
            total = (total[0] + v[0], total[1] + v[1])
        return total


def accordion_decompose(s: Substitution, j: int, n: int) -> AccordionDecomposition:
    """Decompose the occurrence of length ``n`` at 0-based position ``j`` of u."""
    if j < 0 or n < 0:
        raise ValueError("position and length must be nonnegative")
    u = fixed_point_prefix(s, j + n)
    image_len = (len(s.rule0), len(s.rule1))
    # starts[q] = position in u where the image of u[q] begins
    starts = [0] + list(accumulate(image_len[c == "1"] for c in u))
    suffixes: list[Word] = []
    prefixes: list[Word] = []
    lo, hi = j, j + n
    core = ""
    while hi > lo:
        qa = bisect_right(starts, lo) - 1
        qb = bisect_right(starts, hi - 1) - 1
        if qa == qb:
            left, right = starts[qa], starts[qa + 1]
            if lo == left and hi == right:
                suffixes.append("")
                prefixes.append("")
                lo, hi = qa, qa + 1
                continue
            if hi == right:
                suffixes.append(u[lo:hi])
                prefixes.append("")
            elif lo == left:
                suffixes.append("")
                prefixes.append(u[lo:hi])
            else:
                suffixes.append("")
                prefixes.append("")
                core = u[lo:hi]
            break
        suffix = u[lo:starts[qa + 1]] if lo > starts[qa] else ""
        prefix = u[starts[qb]:hi] if hi < starts[qb + 1] else ""
        suffixes.append(suffix)
        prefixes.append(prefix)
        lo = qa + 1 if suffix else qa
        hi = qb if prefix else qb + 1
    return AccordionDecomposition(j, n, tuple(suffixes), tuple(prefixes), core)


class SpectralClassError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    alpha: float
    C2: float               # smallest C with |pi_perp(w)| <= C * w_x^alpha on envelope points
    c1: float               # largest c with excess(n) >= c * n^alpha for n in the fit range
    slope: float            # least-squares slope of log excess against log n
    fit_range: tuple[int, int]
    envelope_points: int
    upper_bound_holds: bool

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "C2": self.C2, "c1": self.c1, "slope": self.slope,
                "fit_range": list(self.fit_range), "envelope_points": self.envelope_points,
                "upper_bound_holds": self.upper_bound_holds}


def bound_check(s: Substitution, profile: ExcessProfile, n_min: int = 64,
                min_wx: int = 4) -> BoundReport:
    """Fit the power-law constants of the excess for |theta2| > 1."""
    sd = eigen_data(s.matrix)
    if sd.theta2_class is not Theta2Class.GT1:
        raise SpectralClassError(f"needs |theta2| > 1, got {sd.theta2_class.value}")
    alpha = sd.alpha
    gamma = float(sd.gamma)
    ns = np.arange(1, profile.N + 1, dtype=float)
    a = np.asarray(profile.a, dtype=float)
    b = np.asarray(profile.b, dtype=float)
    wx = np.concatenate([a, b])
    wy = np.concatenate([ns - a, ns - b])
    keep = wx >= min_wx
    perp = np.abs(wy[keep] - gamma * wx[keep])
    ratios = perp / wx[keep] ** alpha
    C2 = float(ratios.max()) if ratios.size else 0.0
    holds = bool(np.all(perp <= C2 * wx[keep] ** alpha * (1 + 1e-12)))

    hi = profile.N
    lo = min(n_min, hi)
    sel = slice(lo - 1, hi)
    excess = (b - a)[sel]
    c1 = float(np.min(excess / ns[sel] ** alpha))
    slope = float(np.polyfit(np.log(ns[sel]), np.log(np.maximum(excess, 1)), 1)[0]) \
        if hi > lo else float("nan")
    return BoundReport(alpha, C2, c1, slope, (lo, hi), int(keep.sum()), holds)


@dataclass(frozen=True)
class IvtResult:
    """Outcome of the intermediate-value walk for a vector ``w``.

    When ``found``, ``u[start:end]`` is a factor with population ``w`` and
    ``z``, ``z_end`` are the path points at ``start`` and ``end``.
    """

    w: tuple[int, int]
    found: bool
    z: Optional[tuple[int, int]] = None
    z_end: Optional[tuple[int, int]] = None
    start: Optional[int] = None
    end: Optional[int] = None
    seen_below: bool = False
    seen_above: bool = False

    def word(self, s: Substitution) -> Optional[Word]:
        if not self.found:
            return None
        return fixed_point_prefix(s, self.end)[self.start:self.end]


def classify_against_path(path: PopulationPath, point: tuple[int, int]) -> int:
    """+1 if ``point`` is above the path, -1 below, 0 on it.

    The path has exactly one point per antidiagonal ``x + y = n``, and being
    above (no path point straight above) is the same as lying left of that
    point on the antidiagonal.
    """
    px, py = point
    n = px + py
    if n > path.J:
        raise ValueError("path too short for this point")
    gx = int(path.x[n])
    return (gx > px) - (gx < px)


def ivt_search(s: Substitution, w: tuple[int, int], J: int) -> IvtResult:
    """Walk ``z`` along the path up to index ``J`` looking for ``z + w`` on the path.

    ``z + w`` moves by unit steps, so it cannot pass from below the path to
    above it without landing on it; a landing gives ``w`` as a difference of
    two path points.
    """
    wx, wy = w
    if wx < 0 or wy < 0:
        raise ValueError("w must lie in the closed first quadrant")
    size = wx + wy
    x = _zero_prefix_counts(fixed_point_prefix(s, J + size))
    side = np.sign(x[size:size + J + 1] - (x[:J + 1] + wx))   # +1 above, -1 below
    hits = np.flatnonzero(side == 0)
    below, above = bool(np.any(side < 0)), bool(np.any(side > 0))
    if hits.size == 0:
        return IvtResult((wx, wy), False, seen_below=below, seen_above=above)
    j = int(hits[0])
    z = (int(x[j]), j - int(x[j]))
    z_end = (z[0] + wx, z[1] + wy)
    return IvtResult((wx, wy), True, z, z_end, j, j + size,
                     bool(np.any(side[:j] < 0)), bool(np.any(side[:j] > 0)))
