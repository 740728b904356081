"""Quantization errors: closed form V_n and exact distortion of arbitrary codebooks."""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .measure import (
    TRIADIC,
    CylinderUnion,
    MeasureSpec,
    as_fraction,
    cylinder_distortion,
    geometric_family_sums,
    union_distortion_about,
    union_distortion_about_centroid,
)
from .quantizers import Regime, alpha2, alpha3, regime_of

V = TRIADIC.variance
DEFAULT_DEPTH_CAP = 40


@dataclass(frozen=True)
class DistortionResult:
    """Distortion of a codebook, either exact or bracketed.

    ``lower == upper`` whenever ``exact`` is true. ``empty_cells`` lists the
    indices (into the sorted codebook) of points whose Voronoi cell carries no mass.
    """

    lower: Fraction
    upper: Fraction
    exact: bool
    depth_used: int
    empty_cells: tuple[int, ...] = ()

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError(f"distortion not resolved; bounds [{self.lower}, {self.upper}]")
        return self.lower


MAX_PERIOD = 64


def _periodic_address(spec: MeasureSpec, y: Fraction, max_steps: int = MAX_PERIOD) -> tuple[int, ...] | None:
    """Digits p with y = fixed point of S_p, if y's address is purely periodic from here.

    Returns None when y falls in a gap or on a cylinder endpoint (ordinary
    subdivision resolves those), or when no period shows up within ``max_steps``.
    """
    s = spec.ratio
    offsets = [spec.translation(j) for j in range(1, spec.k + 1)]
    start = y
    digits = []
    for _ in range(max_steps):
        for j, t in enumerate(offsets, start=1):
            if t < y < t + s:
                digits.append(j)
                y = (y - t) / s
                break
        else:
            return None
        if y == start:
            return tuple(digits)
    return None


def codebook_distortion(
    points: Iterable,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    spec: MeasureSpec = TRIADIC,
) -> DistortionResult:
    """Integral of min_a (x - a)^2 dP for a finite codebook.

    Cylinders lying inside a single Voronoi cell are integrated in closed form.
    A cylinder straddling a cell boundary is split into its children, so a
    boundary in a gap is resolved after finitely many levels. A boundary sitting
    on a Cantor point with periodic address (1/2, say) is resolved by summing the
    off-path cylinder families as geometric series. Cylinders still straddling a
    boundary at ``depth_cap`` are bracketed. Boundary points belong to the left cell.
    """
    pts = sorted(set(as_fraction(p) for p in points))
    if not pts:
        raise ValueError("empty codebook")
    if depth_cap < 1:
        raise ValueError("depth_cap must be >= 1")
    bounds = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    s, w = spec.ratio, spec.weight
    offsets = [spec.translation(j) for j in range(1, spec.k + 1)]
    cell_mass = [Fraction(0)] * len(pts)
    touched_unresolved: set[int] = set()
    exact_part = Fraction(0)
    lo_extra = Fraction(0)
    hi_extra = Fraction(0)
    deepest = 0
    # (left endpoint, scale, mass, depth)
    stack = [(Fraction(0), Fraction(1), Fraction(1), 0)]
    while stack:
        left, scale, mass, depth = stack.pop()
        right = left + scale
        first = bisect_right(bounds, left)
        last = bisect_left(bounds, right)
        deepest = max(deepest, depth)
        if first == last:
            exact_part += cylinder_distortion(spec, mass, scale, left + scale / 2, pts[first])
            cell_mass[first] += mass
            continue
        if last == first + 1:
            period = _periodic_address(spec, (bounds[first] - left) / scale)
            if period is not None:
                stem = (scale, left, mass)
                for i, step in enumerate(period):
                    for j in range(1, spec.k + 1):
                        if j == step:
                            continue
                        cell = first if j < step else last
                        m, _, d = geometric_family_sums(spec, stem, period, period[:i] + (j,), pts[cell])
                        exact_part += d
                        cell_mass[cell] += m
                continue
        if depth >= depth_cap:
            cells = range(first, last + 1)
            touched_unresolved.update(cells)
            gap = min(max(left - pts[i], pts[i] - right, Fraction(0)) for i in cells)
            lo_extra += mass * gap * gap
            hi_extra += min(cylinder_distortion(spec, mass, scale, left + scale / 2, pts[i]) for i in cells)
        else:
            for t in offsets:
                stack.append((left + t * scale, scale * s, mass * w, depth + 1))
    exact = not touched_unresolved
    empty = tuple(i for i, m in enumerate(cell_mass) if m == 0 and i not in touched_unresolved)
    return DistortionResult(exact_part + lo_extra, exact_part + hi_extra, exact, deepest, empty)


def _v2() -> Fraction:
    return codebook_distortion(alpha2().points).value


def _v3() -> Fraction:
    return codebook_distortion(alpha3().points).value


V2 = _v2()
V3 = _v3()


def vn_exact(n: int) -> Fraction:
    """Closed-form n-th quantization error."""
    if n <= 0:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return V
    if n == 2:
        return V2
    rd = regime_of(n)
    cap = rd.capacity
    if rd.regime is Regime.A:
        inner = (2 * cap - n) * V + (n - cap) * V2
    else:
        inner = (3 * cap - n) * V2 + (n - 2 * cap) * V3
    return inner / Fraction(75) ** rd.ell


@dataclass(frozen=True)
class SplitReport:
    n: int
    partition: tuple[int, int, int]
    lhs: Fraction
    rhs: Fraction

    @property
    def difference(self) -> Fraction:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def splitting_identity_check(n: int, partition: Sequence[int]) -> SplitReport:
    """Compare V_n with (V_{n1} + V_{n2} + V_{n3}) / 75."""
    part = tuple(int(p) for p in partition)
    if len(part) != 3 or any(p < 1 for p in part) or sum(part) != n:
        raise ValueError(f"{part} is not a partition of {n} into three positive parts")
    rhs = sum((vn_exact(p) for p in part), Fraction(0)) / 75
    return SplitReport(n, part, vn_exact(n), rhs)


def balanced_partitions(n: int) -> set[tuple[int, int, int]]:
    """Branch counts (|a n J_1|, |a n J_2|, |a n J_3|) realised by the constructed codebooks."""
    rd = regime_of(n)
    sub = rd.capacity // 3
    base = sub if rd.regime is Regime.A else 2 * sub
    out = set()
    for i1 in range(sub + 1):
        for i2 in range(sub + 1):
            i3 = rd.index_size - i1 - i2
            if 0 <= i3 <= sub:
                out.add((base + i1, base + i2, base + i3))
    return out


def _about(x0, *words, tail=None) -> Fraction:
    return union_distortion_about(CylinderUnion.of(*words, tail=tail), x0)


def _split(left: Sequence[str], right: Sequence[str]) -> Fraction:
    return union_distortion_about_centroid(CylinderUnion.of(*left)) + union_distortion_about_centroid(
        CylinderUnion.of(*right)
    )


def proof_checkpoint_integrals() -> dict[str, Fraction]:
    """Named lower-bound integrals used to rule out competing 2- and n-point configurations."""
    half = Fraction(1, 2)
    level2 = [a + b for a in "123" for b in "123"]
    return {
        "J2J3_about_centroid": union_distortion_about_centroid(CylinderUnion.of("2", "3")),
        "J1_about_1/5": _about(Fraction(1, 5), "1"),
        "J2_about_2/5+J3_about_centroid": _about(Fraction(2, 5), "2") + _about(Fraction(9, 10), "3"),
        "series_2n1_about_2/5": 2 * _about(Fraction(2, 5), tail=("2", 2, 1)),
        "series_2n1_about_1/2": _about(half, tail=("2", 2, 1)),
        "J13_about_1/10": _about(Fraction(1, 10), "13"),
        "right_half_about_centroid": union_distortion_about_centroid(CylinderUnion.of(tail=("", 2, 3))),
        "level2_centroids": sum((union_distortion_about_centroid(CylinderUnion.of(w)) for w in level2), Fraction(0)),
        "A1_case": _split(["1"], ["2112", "2113", "212", "213", "22", "23", "3"]),
        "A2_case": _split(["1", "2111"], ["2113", "212", "213", "22", "23", "3"]),
        "A3_case": _split(["1", "2111", "2112"], ["212", "213", "22", "23", "3"]),
        "A4_case": _split(["1", "211"], ["2122", "2123", "213", "22", "23", "3"]),
        "A5_case": _split(["1", "211", "2121"], ["2123", "213", "22", "23", "3"]),
        "A6A7_case": _split(["1", "211", "2121", "2122"], ["213", "22", "23", "3"]),
        "A8A9_case": _split(["1", "211", "212"], ["21313", "2132", "2133", "22", "23", "3"]),
        "A10_case": union_distortion_about_centroid(CylinderUnion.of("1", "21", "221", "2221", "22221"))
        + union_distortion_about_centroid(CylinderUnion.of(tail=("", 2, 3))),
        "A11A12_case": _split(["1", "21", "221", "2221", "222211"], ["22222", "22223", "2223", "223", "23", "3"]),
    }


# Reference values: exact ones as "p/q", decimal ones as printed (rounded) digits.
CHECKPOINT_REFERENCE: dict[str, str] = {
    "J2J3_about_centroid": "4/135",
    "J1_about_1/5": "13/2700",
    "J2_about_2/5+J3_about_centroid": "17/2700",
    "series_2n1_about_2/5": "19/18900",
    "series_2n1_about_1/2": "1/1350",
    "J13_about_1/10": "37/50625",
    "right_half_about_centroid": "13/882",
    "level2_centroids": "1/5625",
    "A1_case": "0.0299851",
    "A2_case": "0.0299173",
    "A3_case": "0.0297772",
    "A4_case": "0.0296178",
    "A5_case": "0.0294379",
    "A6A7_case": "0.0291947",
    "A8A9_case": "0.0293298",
    "A10_case": "0.0293099",
    "A11A12_case": "0.0292511",
}


def checkpoint_matches(value: Fraction, reference: str) -> bool:
    """Exact equality for "p/q" references, rounding agreement for decimal ones."""
    if "/" in reference:
        return value == Fraction(reference)
    ref = Fraction(reference)
    digits = len(reference.split(".")[1])
    return abs(value - ref) <= Fraction(1, 2 * 10**digits)
