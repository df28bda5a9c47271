"""Two-letter substitutions, their matrices and fixed points.

Internally every substitution works over the letters ``"0"`` and ``"1"``;
words are plain ``str`` objects.  The letters a user typed are kept in
:attr:`Substitution.letters` for display only.
"""
from __future__ import annotations

import enum
import re
from bisect import bisect_left
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterator, NamedTuple, Optional, Sequence

MAX_RULE_LENGTH = 10_000
DEFAULT_MEMORY_BUDGET = 50_000_000  # letters

Word = str


class SubstitutionError(ValueError):
    """Raised for malformed or unsupported substitution input."""


class MemoryBudgetError(RuntimeError):
    """Raised when an operation would materialize more letters than allowed."""


class PopulationVector(NamedTuple):
    zeros: int
    ones: int

    @property
    def length(self) -> int:
        return self.zeros + self.ones


def population(word: Word) -> PopulationVector:
    zeros = word.count("0")
    return PopulationVector(zeros, len(word) - zeros)


class IntMatrix2(NamedTuple):
    """A 2x2 integer matrix ``[[m00, m01], [m10, m11]]``."""

    m00: int
    m01: int
    m10: int
    m11: int

    @classmethod
    def identity(cls) -> "IntMatrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self) -> list[list[int]]:
        return [[self.m00, self.m01], [self.m10, self.m11]]

    @property
    def trace(self) -> int:
        return self.m00 + self.m11

    @property
    def det(self) -> int:
        return self.m00 * self.m11 - self.m01 * self.m10

    def __matmul__(self, other):
        if isinstance(other, IntMatrix2):
            a, b, c, d = self
            e, f, g, h = other
            return IntMatrix2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        x, y = other
        return (self.m00 * x + self.m01 * y, self.m10 * x + self.m11 * y)

    def __pow__(self, k: int) -> "IntMatrix2":
        if k < 0:
            raise ValueError("negative matrix power")
        result, base = IntMatrix2.identity(), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_positive(self) -> bool:
        return min(self) > 0

    def column(self, j: int) -> tuple[int, int]:
        return (self.m00, self.m10) if j == 0 else (self.m01, self.m11)

    def column_sums(self) -> tuple[int, int]:
        return (self.m00 + self.m10, self.m01 + self.m11)


def primitivity_power(m: IntMatrix2, max_power: int = 4) -> Optional[int]:
    """Smallest ``k <= max_power`` with ``m**k`` entrywise positive, else None.

    For 2x2 nonnegative matrices a positive power exists iff ``m**2`` (hence
    ``m**4``) is positive, so the default bound decides primitivity.
    """
    power = m
    for k in range(1, max_power + 1):
        if power.is_positive():
            return k
        power = power @ m
    return None


@dataclass(frozen=True)
class Normalization:
    """How a substitution was normalized: ``power`` applied, letters swapped."""

    power: int = 1
    swapped: bool = False

    def to_json(self) -> dict:
        return {"power": self.power, "swapped": self.swapped}


@dataclass(frozen=True)
class Substitution:
    rule0: Word
    rule1: Word
    letters: tuple[str, str] = ("0", "1")
    normalization: Optional[Normalization] = field(default=None, compare=False)

    def __post_init__(self):
        for name, rule in (("rule0", self.rule0), ("rule1", self.rule1)):
            if not rule:
                raise SubstitutionError(f"empty rule: {name}")
            if rule.strip("01"):
                raise SubstitutionError(f"{name} has letters outside {{0,1}}: {rule!r}")
        if len(set(self.letters)) != 2:
            raise SubstitutionError(f"need two distinct letter names, got {self.letters}")

    @property
    def rules(self) -> tuple[Word, Word]:
        return (self.rule0, self.rule1)

    @property
    def max_rule_length(self) -> int:
        return max(len(self.rule0), len(self.rule1))

    @property
    def matrix(self) -> IntMatrix2:
        return substitution_matrix(self)

    def apply(self, word: Word) -> Word:
        return word.translate(_table(self.rule0, self.rule1))

    def render(self, word: Word) -> str:
        """Spell an internal 0/1 word with the user's letter names."""
        if self.letters == ("0", "1"):
            return word
        return word.translate(str.maketrans("01", "".join(self.letters)))

    def __str__(self) -> str:
        a, b = self.letters
        return f"{a}->{self.render(self.rule0)};{b}->{self.render(self.rule1)}"


_TABLES: dict = {}


def _table(rule0: str, rule1: str) -> dict:
    key = (rule0, rule1)
    table = _TABLES.get(key)
    if table is None:
        if len(_TABLES) > 256:
            _TABLES.clear()
        table = _TABLES[key] = {48: rule0, 49: rule1}
    return table


_RULE_RE = re.compile(r"^\s*(\S)\s*->\s*(\S*)\s*$")


def parse_substitution(text: str) -> Substitution:
    """Parse ``"a->w;b->v"`` into a :class:`Substitution`.

    Letter names may be any two distinct non-space characters.  If they are
    exactly ``0`` and ``1`` they keep their meaning; otherwise they are
    mapped to 0 and 1 in the order their rules appear.
    """
    if not text or not text.strip():
        raise SubstitutionError("empty substitution")
    rules: dict[str, str] = {}
    for chunk in text.strip().strip(";").split(";"):
        m = _RULE_RE.match(chunk)
        if m is None:
            raise SubstitutionError(f"cannot parse rule {chunk.strip()!r}")
        letter, image = m.groups()
        if letter in rules:
            raise SubstitutionError(f"duplicate rule for letter {letter!r}")
        if not image:
            raise SubstitutionError(f"empty rule for letter {letter!r}")
        if len(image) > MAX_RULE_LENGTH:
            raise SubstitutionError(f"rule for {letter!r} longer than {MAX_RULE_LENGTH} letters")
        rules[letter] = image
    return substitution_from_rules(rules)


def substitution_from_rules(rules: dict[str, str]) -> Substitution:
    """Build a substitution from an ordered ``letter -> image`` mapping."""
    used = set("".join(rules.values())) | set(rules)
    missing = used - set(rules)
    if missing:
        raise SubstitutionError(f"missing rule for letter(s) {sorted(missing)}")
    if len(rules) != 2:
        raise SubstitutionError(f"need exactly two letters, got {len(rules)}")
    names = tuple(rules)
    if set(names) == {"0", "1"}:
        names = ("0", "1")
    to_internal = str.maketrans(dict(zip(names, "01")))
    return Substitution(
        rules[names[0]].translate(to_internal),
        rules[names[1]].translate(to_internal),
        letters=names,
    )


def substitution_matrix(s: Substitution) -> IntMatrix2:
    """Column j is the population vector of the image of letter j."""
    z0, o0 = population(s.rule0)
    z1, o1 = population(s.rule1)
    return IntMatrix2(z0, z1, o0, o1)


def is_primitive(s: Substitution) -> tuple[bool, Optional[int]]:
    k = primitivity_power(substitution_matrix(s))
    return (k is not None, k)


def power(s: Substitution, k: int) -> Substitution:
    """The substitution ``s`` iterated ``k`` times."""
    if k < 1:
        raise ValueError(f"power must be >= 1, got {k}")
    r0, r1 = s.rule0, s.rule1
    table = _table(s.rule0, s.rule1)
    for _ in range(k - 1):
        r0, r1 = r0.translate(table), r1.translate(table)
    norm = s.normalization or Normalization()
    return Substitution(r0, r1, s.letters,
                        Normalization(norm.power * k, norm.swapped))


def swap_letters(s: Substitution) -> Substitution:
    swap = str.maketrans("01", "10")
    norm = s.normalization or Normalization()
    return Substitution(
        s.rule1.translate(swap),
        s.rule0.translate(swap),
        (s.letters[1], s.letters[0]),
        Normalization(norm.power, not norm.swapped),
    )


def normalize(s: Substitution) -> Substitution:
    """Return an equivalent substitution whose image of 0 starts with 0.

    The first-letter map ``a -> s(a)[0]`` on two letters either fixes 0,
    fixes only 1 (swap the letter names), or swaps the letters (square).
    """
    if s.rule0[0] == "0":
        if s.normalization is None:
            return Substitution(s.rule0, s.rule1, s.letters, Normalization())
        return s
    if s.rule1[0] == "1":
        return swap_letters(s)
    return power(s, 2)


def is_normalized(s: Substitution) -> bool:
    return s.rule0[0] == "0"


def _require_normalized(s: Substitution) -> None:
    if not is_normalized(s):
        raise SubstitutionError("substitution must be normalized (image of 0 starting with 0)")
    if len(s.rule0) < 2:
        raise SubstitutionError("image of 0 has length 1; there is no infinite fixed point")


def fixed_point_prefix(s: Substitution, n: int,
                       budget: int = DEFAULT_MEMORY_BUDGET) -> Word:
    """First ``n`` letters of the one-sided fixed point starting with 0.

    Only the part of the current prefix whose image is needed gets expanded,
    so at most ``n`` plus one rule length letters are built per round.
    """
    _require_normalized(s)
    if n < 0:
        raise ValueError("negative length")
    if n > budget:
        raise MemoryBudgetError(f"prefix of {n} letters exceeds budget {budget}")
    table = _table(s.rule0, s.rule1)
    lens = (len(s.rule0), len(s.rule1))
    word = "0"
    while len(word) < n:
        ends = list(accumulate(lens[c == "1"] for c in word))
        m = min(bisect_left(ends, n) + 1, len(word))
        word = word[:m].translate(table)
    return word[:n]


def iter_fixed_point(s: Substitution) -> Iterator[str]:
    """Yield the fixed point letter by letter (self-generating reading)."""
    _require_normalized(s)
    rules = s.rules
    produced = list(rules[0])
    yield from produced
    i = 1
    while True:
        image = rules[produced[i] == "1"]
        produced.extend(image)
        yield from image
        i += 1


class Periodicity(enum.Enum):
    APERIODIC = "aperiodic"
    PERIODIC = "periodic"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class AperiodicityVerdict:
    kind: Periodicity
    period: Optional[int] = None
    complexity: tuple[int, ...] = ()   # complexity[n-1] = number of factors of length n

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "period": self.period,
                "complexity": list(self.complexity)}


def check_aperiodic(s: Substitution, depth: int = 64) -> AperiodicityVerdict:
    """Decide periodicity of the fixed point for periods up to ``depth``.

    A period ``p`` is certified when the prefix ``v`` of length ``p`` has an
    image that is a power of ``v``: then ``v^inf`` is a fixed point starting
    with 0, hence equals ``u``.  Otherwise the fixed point is reported
    aperiodic when its factor complexity stays above ``n`` for every
    ``n <= depth`` (Morse-Hedlund), and undetermined if not.
    """
    from .language import factors

    _require_normalized(s)
    horizon = max(4 * depth * s.max_rule_length, 2 * depth)
    prefix = fixed_point_prefix(s, horizon)
    for p in range(1, depth + 1):
        v = prefix[:p]
        image = s.apply(v)
        if len(image) % p == 0 and image == v * (len(image) // p):
            if prefix == (v * (horizon // p + 1))[:horizon]:
                return AperiodicityVerdict(Periodicity.PERIODIC, period=p)
    complexity = []
    for n in range(1, depth + 1):
        try:
            complexity.append(len(factors(s, n)))
        except MemoryBudgetError:
            return AperiodicityVerdict(Periodicity.UNDETERMINED, complexity=tuple(complexity))
    if all(c >= n + 1 for n, c in enumerate(complexity, start=1)):
        return AperiodicityVerdict(Periodicity.APERIODIC, complexity=tuple(complexity))
    return AperiodicityVerdict(Periodicity.UNDETERMINED, complexity=tuple(complexity))
