"""Candidate optimal n-point codebooks for the triadic Cantor distribution.

For n >= 3 write 3^l <= n < 3^(l+1). In regime A (n <= 2*3^l) the codebook keeps
the centroid of every level-l cylinder except those in an index set I, which are
replaced by scaled copies of the optimal 2-point set. In regime B every level-l
cylinder carries a copy of the 2-point set, except those in I which carry the
3-point set.
"""
from __future__ import annotations

import enum
from bisect import bisect_right
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

from .measure import TRIADIC, CylinderUnion, Word, WordLike, map_apply, union_mass_centroid, word_str


class CardinalityError(ValueError):
    pass


class LevelError(ValueError):
    pass


class Regime(enum.Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class RegimeDescriptor:
    n: int
    ell: int
    regime: Regime

    @property
    def capacity(self) -> int:
        return 3**self.ell

    @property
    def index_size(self) -> int:
        """Required cardinality of the index set."""
        if self.regime is Regime.A:
            return self.n - self.capacity
        return self.n - 2 * self.capacity


def regime_of(n: int) -> RegimeDescriptor:
    if n < 3:
        raise ValueError(f"regime is defined for n >= 3, got {n}")
    ell = 0
    while 3 ** (ell + 1) <= n:
        ell += 1
    regime = Regime.A if n <= 2 * 3**ell else Regime.B
    return RegimeDescriptor(n, ell, regime)


@dataclass(frozen=True)
class IndexSet:
    level: int
    members: tuple[Word, ...] = ()

    @classmethod
    def of(cls, level: int, words: Iterable[WordLike] = ()) -> "IndexSet":
        ws = tuple(sorted(set(TRIADIC.word(w) for w in words)))
        for w in ws:
            if len(w) != level:
                raise LevelError(f"index word {word_str(w)!r} has length {len(w)}, expected {level}")
        return cls(level, ws)

    def __len__(self):
        return len(self.members)

    def __contains__(self, w):
        return w in self.members

    def __str__(self):
        return "{" + ",".join(word_str(w) for w in self.members) + "}"


@dataclass(frozen=True)
class Quantizer:
    points: tuple[Fraction, ...]
    n: int
    regime: RegimeDescriptor | None = None
    index_set: IndexSet | None = None

    def __post_init__(self):
        if len(self.points) != self.n:
            raise CardinalityError(f"expected {self.n} points, got {len(self.points)}")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise ValueError("codebook points must be strictly increasing")

    def __len__(self):
        return self.n

    def as_floats(self) -> list[float]:
        return [float(p) for p in self.points]


def _centroid(*words: str) -> Fraction:
    return union_mass_centroid(CylinderUnion.of(*words))[1]


ALPHA2_POINTS = (_centroid("1", "21"), _centroid("22", "23", "3"))
ALPHA3_POINTS = tuple(map_apply(TRIADIC, str(j), Fraction(1, 2)) for j in (1, 2, 3))


def alpha1() -> Quantizer:
    return Quantizer((Fraction(1, 2),), 1)


def alpha2() -> Quantizer:
    return Quantizer(ALPHA2_POINTS, 2)


def alpha3() -> Quantizer:
    return Quantizer(ALPHA3_POINTS, 3, regime_of(3), IndexSet(1))


def level_words(level: int) -> list[Word]:
    return list(itertools.product((1, 2, 3), repeat=level))


def _image(w: Word, points: Sequence[Fraction]) -> list[Fraction]:
    return [map_apply(TRIADIC, w, p) for p in points]


def optimal_set(n: int, index_set: IndexSet | Iterable[WordLike] = ()) -> Quantizer:
    """Build the codebook for n >= 3 from an index set of level-l words."""
    rd = regime_of(n)
    if not isinstance(index_set, IndexSet):
        index_set = IndexSet.of(rd.ell, index_set)
    elif index_set.level != rd.ell:
        raise LevelError(f"index set has level {index_set.level}, n={n} needs level {rd.ell}")
    if len(index_set) != rd.index_size:
        rule = "n - 3^l" if rd.regime is Regime.A else "n - 2*3^l"
        raise CardinalityError(
            f"n={n} (l={rd.ell}, regime {rd.regime.value}) needs |I| = {rule} = {rd.index_size}, got {len(index_set)}"
        )
    if rd.regime is Regime.A:
        base, marked = (Fraction(1, 2),), ALPHA2_POINTS
    else:
        base, marked = ALPHA2_POINTS, ALPHA3_POINTS
    points: list[Fraction] = []
    for w in level_words(rd.ell):
        points.extend(_image(w, marked if w in index_set else base))
    return Quantizer(tuple(sorted(points)), n, rd, index_set)


def count_optimal_sets(n: int) -> int:
    rd = regime_of(n)
    return comb(rd.capacity, rd.index_size)


def enumerate_index_sets(n: int, limit: int | None = None) -> Iterator[IndexSet]:
    """Valid index sets for n, lexicographic on digit strings, truncated at ``limit``."""
    rd = regime_of(n)
    combos = itertools.combinations(level_words(rd.ell), rd.index_size)
    for members in itertools.islice(combos, limit):
        yield IndexSet(rd.ell, members)


def optimal_quantizer(n: int, index_set=None) -> Quantizer:
    """Any n >= 1; defaults to the lexicographically first index set."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return alpha1()
    if n == 2:
        return alpha2()
    if index_set is None:
        index_set = next(enumerate_index_sets(n))
    return optimal_set(n, index_set)


def all_optimal_quantizers(n: int, limit: int | None = None) -> Iterator[Quantizer]:
    if n <= 2:
        yield optimal_quantizer(n)
        return
    for I in enumerate_index_sets(n, limit):
        yield optimal_set(n, I)


def push_index_set(index_set: IndexSet) -> IndexSet:
    """The index set of the 3n-point codebook made of three scaled copies."""
    return IndexSet(
        index_set.level + 1,
        tuple(sorted((j,) + w for j in (1, 2, 3) for w in index_set.members)),
    )


def reflect(points: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sorted(1 - p for p in points))


def _templates(n: int, allow_reflection: bool) -> tuple[int, dict[int, list[tuple[Fraction, ...]]]]:
    """Level and the per-cylinder point patterns allowed for n points."""
    half = (Fraction(1, 2),)
    a2 = [ALPHA2_POINTS] + ([reflect(ALPHA2_POINTS)] if allow_reflection else [])
    if n == 1:
        return 0, {1: [half]}
    if n == 2:
        return 0, {2: a2}
    rd = regime_of(n)
    if rd.regime is Regime.A:
        return rd.ell, {1: [half], 2: a2}
    return rd.ell, {2: a2, 3: [ALPHA3_POINTS]}


def family_deviation(codebook: Sequence[float], n: int, allow_reflection: bool = False) -> float:
    """Max pointwise distance from ``codebook`` to the nearest constructed n-point set.

    Points are grouped by nearest level-l cylinder and compared with the
    pattern that cylinder would carry. With ``allow_reflection`` each scaled
    copy of the 2-point set may also appear mirrored, which P's symmetry makes
    equally good. Returns inf when the grouping fits no pattern.
    """
    pts = sorted(float(c) for c in codebook)
    if len(pts) != n:
        return float("inf")
    ell, patterns = _templates(n, allow_reflection)
    words = level_words(ell)
    lows = [float(map_apply(TRIADIC, w, 0)) for w in words]
    width = 5.0**-ell
    groups: dict[Word, list[float]] = {}
    for x in pts:
        i = bisect_right(lows, x)
        near = [j for j in (i - 1, i) if 0 <= j < len(words)]
        j = min(near, key=lambda j: max(lows[j] - x, x - lows[j] - width, 0.0))
        groups.setdefault(words[j], []).append(x)
    worst = 0.0
    for w in words:
        got = groups.get(w, [])
        options = patterns.get(len(got))
        if not options:
            return float("inf")
        dev = min(
            max(abs(a - float(map_apply(TRIADIC, w, b))) for a, b in zip(got, opt))
            for opt in options
        )
        worst = max(worst, dev)
    return worst
