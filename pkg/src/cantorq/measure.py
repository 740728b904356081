"""Exact k-adic Cantor measure: maps, cylinders and second-moment integrals.

Every value here is a :class:`fractions.Fraction`. The measure is the
self-similar probability P = sum_j (1/k) P o S_j^{-1} with
S_j(x) = x/(2k-1) + 2(j-1)/(2k-1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

Word = tuple[int, ...]
WordLike = Union[str, Sequence[int]]


class InvalidWordError(ValueError):
    pass


class UnsupportedMeasureError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted on exact paths; pass a Fraction or 'p/q'")
    return Fraction(x)


@dataclass(frozen=True)
class MeasureSpec:
    k: int = 3

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"branch count must be >= 2, got {self.k}")

    @property
    def ratio(self) -> Fraction:
        return Fraction(1, 2 * self.k - 1)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, self.k)

    def translation(self, j: int) -> Fraction:
        return Fraction(2 * (j - 1), 2 * self.k - 1)

    @cached_property
    def variance(self) -> Fraction:
        return moments(self)[1]

    def word(self, w: WordLike) -> Word:
        """Validate ``w`` and return it as a tuple of digits."""
        if isinstance(w, str):
            if self.k > 9:
                raise InvalidWordError("string words need k <= 9; pass a digit sequence")
            if not w.isdigit() and w != "":
                raise InvalidWordError(f"word {w!r} has non-digit characters")
            digits = tuple(int(c) for c in w)
        else:
            digits = tuple(int(c) for c in w)
        for d in digits:
            if not 1 <= d <= self.k:
                raise InvalidWordError(f"digit {d} out of range 1..{self.k} in word {w!r}")
        return digits


TRIADIC = MeasureSpec(3)


def word_str(w: Word) -> str:
    return "".join(str(d) for d in w)


def map_apply(spec: MeasureSpec, w: WordLike, x) -> Fraction:
    """Return S_w(x) = S_{w1}(S_{w2}(...S_{wn}(x)))."""
    w = spec.word(w)
    y = as_fraction(x)
    s = spec.ratio
    for j in reversed(w):
        y = s * y + spec.translation(j)
    return y


def affine_coefficients(spec: MeasureSpec, w: WordLike) -> tuple[Fraction, Fraction]:
    """S_w(x) = scale * x + offset."""
    w = spec.word(w)
    return spec.ratio ** len(w), map_apply(spec, w, 0)


@dataclass(frozen=True)
class Cylinder:
    word: Word
    left: Fraction
    right: Fraction
    mass: Fraction
    scale: Fraction
    centroid: Fraction


def cylinder_data(spec: MeasureSpec, w: WordLike) -> Cylinder:
    w = spec.word(w)
    scale, offset = affine_coefficients(spec, w)
    return Cylinder(
        word=w,
        left=offset,
        right=offset + scale,
        mass=spec.weight ** len(w),
        scale=scale,
        centroid=offset + scale / 2,
    )


def moments(spec: MeasureSpec) -> tuple[Fraction, Fraction]:
    """Mean and variance of P.

    The variance solves V = s^2 V + (1/k) sum_j (S_j(1/2) - 1/2)^2.
    """
    s = spec.ratio
    half = Fraction(1, 2)
    spread = spec.weight * sum((s * half + spec.translation(j) - half) ** 2 for j in range(1, spec.k + 1))
    return half, spread / (1 - s * s)


def cylinder_distortion(spec: MeasureSpec, mass, scale, centroid, x0) -> Fraction:
    """Integral of (x - x0)^2 over one cylinder, from its mass, scale and centroid."""
    return mass * (scale * scale * spec.variance + (centroid - x0) ** 2)


def words_disjoint(a: Word, b: Word) -> bool:
    n = min(len(a), len(b))
    return a[:n] != b[:n]


@dataclass(frozen=True)
class Tail:
    """The cylinders J_{w t}, J_{w r t}, J_{w r r t}, ... for stem w, repeat r, terminal t."""

    stem: Word
    repeat: int
    terminal: int

    def words(self, count: int) -> list[Word]:
        return [self.stem + (self.repeat,) * m + (self.terminal,) for m in range(count)]

    def overlaps(self, u: Word) -> bool:
        # u meets the tail iff u is a prefix of w, or u = w r^j v with v empty or starting with t
        n = len(self.stem)
        if len(u) <= n:
            return self.stem[: len(u)] == u
        if u[:n] != self.stem:
            return False
        rest = u[n:]
        i = 0
        while i < len(rest) and rest[i] == self.repeat:
            i += 1
        return i == len(rest) or rest[i] == self.terminal


@dataclass(frozen=True)
class CylinderUnion:
    spec: MeasureSpec
    words: tuple[Word, ...] = ()
    tail: Tail | None = None

    def __post_init__(self):
        for i, a in enumerate(self.words):
            for b in self.words[i + 1:]:
                if not words_disjoint(a, b):
                    raise ValueError(f"cylinders {word_str(a)!r} and {word_str(b)!r} overlap")
        if self.tail is not None:
            if self.tail.repeat == self.tail.terminal:
                raise ValueError("tail repeat and terminal digits must differ")
            for u in self.words:
                if self.tail.overlaps(u):
                    raise ValueError(f"cylinder {word_str(u)!r} overlaps the tail")

    @classmethod
    def of(cls, *words: WordLike, tail: tuple[WordLike, int, int] | None = None, spec: MeasureSpec = TRIADIC):
        """Build from word strings, e.g. ``CylinderUnion.of("1", "21")``.

        ``tail=(stem, repeat, terminal)`` appends J_{stem t} u J_{stem r t} u ...
        """
        t = None
        if tail is not None:
            stem, r, term = tail
            stem = spec.word(stem)
            r, term = spec.word((r, term))
            t = Tail(stem, r, term)
        return cls(spec, tuple(spec.word(w) for w in words), t)

    @property
    def is_empty(self) -> bool:
        return not self.words and self.tail is None

    def pieces(self) -> Iterable[Cylinder]:
        for w in self.words:
            yield cylinder_data(self.spec, w)


def geometric_family_sums(
    spec: MeasureSpec,
    stem: tuple[Fraction, Fraction, Fraction],
    period: Word,
    terminal: Word,
    x0: Fraction,
) -> tuple[Fraction, Fraction, Fraction]:
    """Closed-form (mass, first moment, second moment about x0) of the family
    J_{w u}, J_{w p u}, J_{w p p u}, ... for stem map w, period word p, terminal word u.

    ``stem`` is (scale, offset, mass) of S_w. The m-th cylinder has mass
    M mu^m, scale sigma rho^m and centroid A + B rho^m, so every sum is geometric.
    """
    stem_scale, stem_offset, stem_mass = stem
    rho, p_offset = affine_coefficients(spec, period)
    mu = spec.weight ** len(period)
    fixed = p_offset / (1 - rho)
    u = cylinder_data(spec, terminal)
    A = stem_offset + stem_scale * fixed
    B = stem_scale * (u.centroid - fixed)
    M = stem_mass * u.mass
    sigma = stem_scale * u.scale

    mass = M / (1 - mu)
    first = M * (A / (1 - mu) + B / (1 - mu * rho))
    d = A - x0
    second = M * (
        sigma * sigma * spec.variance / (1 - mu * rho * rho)
        + d * d / (1 - mu)
        + 2 * d * B / (1 - mu * rho)
        + B * B / (1 - mu * rho * rho)
    )
    return mass, first, second


def _tail_sums(spec: MeasureSpec, tail: Tail, x0: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    scale, offset = affine_coefficients(spec, tail.stem)
    stem = (scale, offset, spec.weight ** len(tail.stem))
    return geometric_family_sums(spec, stem, (tail.repeat,), (tail.terminal,), x0)


def union_mass_centroid(u: CylinderUnion) -> tuple[Fraction, Fraction]:
    if u.is_empty:
        raise ValueError("empty cylinder union")
    mass = Fraction(0)
    first = Fraction(0)
    for c in u.pieces():
        mass += c.mass
        first += c.mass * c.centroid
    if u.tail is not None:
        m, f, _ = _tail_sums(u.spec, u.tail, Fraction(0))
        mass += m
        first += f
    return mass, first / mass


def union_distortion_about(u: CylinderUnion, x0) -> Fraction:
    """Exact integral of (x - x0)^2 dP over the union."""
    if u.is_empty:
        raise ValueError("empty cylinder union")
    x0 = as_fraction(x0)
    total = sum(
        (cylinder_distortion(u.spec, c.mass, c.scale, c.centroid, x0) for c in u.pieces()),
        Fraction(0),
    )
    if u.tail is not None:
        total += _tail_sums(u.spec, u.tail, x0)[2]
    return total


def union_distortion_about_centroid(u: CylinderUnion) -> Fraction:
    return union_distortion_about(u, union_mass_centroid(u)[1])


@dataclass(frozen=True)
class HalfSplit:
    left_centroid: Fraction
    right_centroid: Fraction
    distortion: Fraction
    left_mass: Fraction = field(default=Fraction(1, 2))


def half_split_stats(spec: MeasureSpec = TRIADIC) -> HalfSplit:
    """Conditional means of the halves [0, 1/2] and [1/2, 1] and the distortion of that pair."""
    if spec.k != 3:
        raise UnsupportedMeasureError("half split is only defined here for k = 3")
    left = CylinderUnion(spec, (), Tail((), 2, 1))
    right = CylinderUnion(spec, (), Tail((), 2, 3))
    m1, a1 = union_mass_centroid(left)
    _, a2 = union_mass_centroid(right)
    d = union_distortion_about(left, a1) + union_distortion_about(right, a2)
    return HalfSplit(a1, a2, d, m1)
