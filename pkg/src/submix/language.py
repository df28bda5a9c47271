"""Factor language of a primitive two-letter substitution.

Everything here is computed from *covering strings*: for a length ``n``
pick the smallest level ``k`` with every level-k supertile ``s^k(a)`` at
least ``n`` long.  The fixed point is a concatenation of level-k supertiles,
so each window of length ``n`` starts inside one supertile and ends inside
it or the next one.  Hence the length-``n`` factors are exactly the
length-``n`` windows of the strings ``s^k(a) s^k(b)`` over allowed 2-blocks
``ab``.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .core import (
    DEFAULT_MEMORY_BUDGET,
    MemoryBudgetError,
    Substitution,
    SubstitutionError,
    Word,
    fixed_point_prefix,
    is_primitive,
    normalize,
)


@lru_cache(maxsize=64)
def supertiles(s: Substitution, k: int) -> tuple[Word, Word]:
    """The level-k supertiles ``s^k(0)``, ``s^k(1)``."""
    if k == 0:
        return ("0", "1")
    a, b = supertiles(s, k - 1)
    return (s.apply(a), s.apply(b))


def supertile_lengths(s: Substitution, k: int) -> tuple[int, int]:
    """Lengths of ``s^k(0)``, ``s^k(1)`` from the matrix, no expansion."""
    m = s.matrix
    x, y = 1, 1
    for _ in range(k):
        x, y = x * m.m00 + y * m.m10, x * m.m01 + y * m.m11
    return (x, y)


def covering_scale(s: Substitution, n: int) -> int:
    """Smallest k with both level-k supertiles at least ``n`` letters long."""
    _require_primitive(s)
    k = 0
    while min(supertile_lengths(s, k)) < n:
        k += 1
    return k


def _require_primitive(s: Substitution) -> None:
    if not is_primitive(s)[0]:
        raise SubstitutionError("substitution is not primitive")


def _seed_block(s: Substitution) -> Word:
    k = 1
    while True:
        a, b = supertiles(s, k)
        for w in (a, b):
            if len(w) >= 2:
                return w[:2]
        k += 1


@lru_cache(maxsize=64)
def allowed_two_blocks(s: Substitution) -> frozenset[Word]:
    """All 2-letter factors, as the closure of a seed block under ab -> blocks of s(a)s(b)."""
    _require_primitive(s)
    seed = fixed_point_prefix(s, 2) if s.rule0[0] == "0" else _seed_block(s)
    found = {seed}
    todo = [seed]
    while todo:
        ab = todo.pop()
        image = s.apply(ab)
        for i in range(len(image) - 1):
            block = image[i:i + 2]
            if block not in found:
                found.add(block)
                todo.append(block)
    return frozenset(found)


def covering_strings(s: Substitution, n: int,
                     budget: int = DEFAULT_MEMORY_BUDGET) -> list[Word]:
    """Strings whose length-``n`` windows are exactly the length-``n`` factors."""
    k = covering_scale(s, max(n, 1))
    lengths = supertile_lengths(s, k)
    blocks = sorted(allowed_two_blocks(s))
    total = sum(lengths[int(a)] + lengths[int(b)] for a, b in blocks)
    if total > budget:
        raise MemoryBudgetError(f"covering strings need {total} letters (budget {budget})")
    tiles = supertiles(s, k)
    return [tiles[int(a)] + tiles[int(b)] for a, b in blocks]


def factors(s: Substitution, n: int, budget: int = DEFAULT_MEMORY_BUDGET) -> set[Word]:
    """The set of length-``n`` words of the subshift."""
    if n < 1:
        raise ValueError("factor length must be >= 1")
    out: set[Word] = set()
    for string in covering_strings(s, n, budget):
        if len(out) > budget // max(n, 1):
            raise MemoryBudgetError("factor set exceeds memory budget")
        out.update(string[i:i + n] for i in range(len(string) - n + 1))
    return out


def is_factor(s: Substitution, w: Word) -> bool:
    if not w:
        return True
    if w.strip("01"):
        return False
    return any(w in string for string in covering_strings(s, len(w)))


def brute_force_factors(s: Substitution, n: int, prefix_len: int) -> set[Word]:
    """Length-``n`` windows of a fixed-point prefix; an independent oracle."""
    if prefix_len < n:
        raise ValueError("prefix_len must be >= n")
    normal = normalize(s)
    prefix = fixed_point_prefix(normal, prefix_len)
    if normal.normalization.swapped != (s.normalization.swapped if s.normalization else False):
        prefix = prefix.translate(str.maketrans("01", "10"))
    return {prefix[i:i + n] for i in range(prefix_len - n + 1)}


def _zeros_prefix(word: Word) -> np.ndarray:
    bits = np.frombuffer(word.encode("ascii"), dtype=np.uint8) == ord("0")
    out = np.zeros(len(word) + 1, dtype=np.int64)
    np.cumsum(bits, out=out[1:])
    return out


def _starts(word: Word, pattern: Word) -> np.ndarray:
    """Boolean array, True where ``pattern`` occurs in ``word``."""
    hits = np.zeros(len(word), dtype=bool)
    i = word.find(pattern)
    while i >= 0:
        hits[i] = True
        i = word.find(pattern, i + 1)
    return hits


@dataclass(frozen=True)
class ExcessProfile:
    """Min/max zero counts ``a[n-1]``, ``b[n-1]`` over factors of length n."""

    N: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def excess(self, n: int) -> int:
        return self.b[n - 1] - self.a[n - 1]

    @property
    def excesses(self) -> np.ndarray:
        return np.asarray(self.b, dtype=np.int64) - np.asarray(self.a, dtype=np.int64)

    def truncate(self, N: int) -> "ExcessProfile":
        return ExcessProfile(N, self.a[:N], self.b[:N])

    def violations(self) -> list[str]:
        """Broken structural inequalities (empty for a valid profile)."""
        bad = []
        for n in range(1, self.N + 1):
            a, b = self.a[n - 1], self.b[n - 1]
            if not 0 <= a <= b <= n:
                bad.append(f"n={n}: need 0 <= a <= b <= n, got a={a} b={b}")
            if n < self.N:
                da, db = self.a[n] - a, self.b[n] - b
                if da not in (0, 1) or db not in (0, 1):
                    bad.append(f"n={n}: steps a+{da}, b+{db}")
        return bad

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "a", "b", "excess"])
        for n in range(1, self.N + 1):
            writer.writerow([n, self.a[n - 1], self.b[n - 1], self.b[n - 1] - self.a[n - 1]])
        return buf.getvalue()


def _window_extremes(prefixes: list[np.ndarray], n: int) -> tuple[int, int]:
    lo, hi = n, 0
    for p in prefixes:
        counts = p[n:] - p[:-n]
        lo = min(lo, int(counts.min()))
        hi = max(hi, int(counts.max()))
    return lo, hi


def excess_profile(s: Substitution, N: int, workers: int = 1,
                   budget: int = DEFAULT_MEMORY_BUDGET) -> ExcessProfile:
    """Compute ``a(n)``, ``b(n)`` for ``1 <= n <= N``.

    Each n is scanned on the covering strings of its own (smallest valid)
    level, so short windows do not pay for the longest supertiles.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    _require_primitive(s)
    a = [0] * N
    b = [0] * N
    n = 1
    while n <= N:
        k = covering_scale(s, n)
        upper = min(N, min(supertile_lengths(s, k)))
        prefixes = [_zeros_prefix(w) for w in covering_strings(s, n, budget)]
        levels = range(n, upper + 1)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(lambda m: _window_extremes(prefixes, m), levels))
        else:
            results = [_window_extremes(prefixes, m) for m in levels]
        for m, (lo, hi) in zip(levels, results):
            a[m - 1], b[m - 1] = lo, hi
        n = upper + 1
    return ExcessProfile(N, tuple(a), tuple(b))


def _check_factor(s: Substitution, w: Word, name: str) -> None:
    if not w or not is_factor(s, w):
        raise SubstitutionError(f"{name}={w!r} is not a factor")


def connector_lengths(s: Substitution, w1: Word, w2: Word, kmax: int) -> set[int]:
    """All ``|B| <= kmax`` such that ``w1 B w2`` is a factor."""
    _check_factor(s, w1, "W1")
    _check_factor(s, w2, "W2")
    total = len(w1) + kmax + len(w2)
    found = np.zeros(kmax + 1, dtype=bool)
    for string in covering_strings(s, total):
        first = _starts(string, w1)
        second = _starts(string, w2)
        for gap in range(kmax + 1):
            if found[gap]:
                continue
            off = len(w1) + gap
            if off >= len(string):
                break
            if np.any(first[:len(string) - off] & second[off:]):
                found[gap] = True
    return {int(g) for g in np.flatnonzero(found)}


def connector_population_vectors(s: Substitution, w1: Word, w2: Word,
                                 max_len: int) -> set[tuple[int, int]]:
    """Population vectors of ``w1 V`` over factors ``w1 V w2`` with ``|w1 V| <= max_len``."""
    _check_factor(s, w1, "W1")
    _check_factor(s, w2, "W2")
    out: set[tuple[int, int]] = set()
    if max_len < len(w1):
        return out
    for string in covering_strings(s, max_len + len(w2)):
        first = _starts(string, w1)
        second = _starts(string, w2)
        zeros = _zeros_prefix(string)
        for length in range(len(w1), max_len + 1):
            if length >= len(string):
                break
            idx = np.flatnonzero(first[:len(string) - length] & second[length:])
            if idx.size:
                counts = np.unique(zeros[idx + length] - zeros[idx])
                out.update((int(c), length - int(c)) for c in counts)
    return out


def factor_complexity(s: Substitution, depth: int) -> list[int]:
    return [len(factors(s, n)) for n in range(1, depth + 1)]


def zero_count_range(words: Iterable[Word]) -> Optional[tuple[int, int]]:
    counts = [w.count("0") for w in words]
    return (min(counts), max(counts)) if counts else None
