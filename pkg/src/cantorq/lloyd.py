"""Lloyd iteration on a depth-d atomic approximation of the triadic Cantor measure.

Independent numerical evidence for optimality: atoms sit at the centroids of
the level-d cylinders, each with mass 3^-d, and k-means runs on them in double
precision.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .measure import TRIADIC, map_apply

MAX_DEPTH = 15


@dataclass(frozen=True)
class DiscreteMeasure:
    depth: int
    locations: np.ndarray
    masses: np.ndarray

    def __len__(self):
        return len(self.locations)

    def exact_locations(self) -> list[Fraction]:
        return exact_atoms(self.depth)


def exact_atoms(depth: int) -> list[Fraction]:
    """S_w(1/2) for every word of length ``depth``, in lexicographic order."""
    return list(_exact_atoms(depth))


@functools.lru_cache(maxsize=8)
def _exact_atoms(depth: int) -> tuple[Fraction, ...]:
    words = itertools.product((1, 2, 3), repeat=depth)
    return tuple(map_apply(TRIADIC, w, Fraction(1, 2)) for w in words)


def discretize(depth: int) -> DiscreteMeasure:
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in 1..{MAX_DEPTH}, got {depth}")
    # built level by level in floats; exact_atoms gives the same points as Fractions
    locs = np.array([0.5])
    for _ in range(depth):
        locs = np.concatenate([locs / 5 + 2 * (j - 1) / 5 for j in (1, 2, 3)])
        locs.sort()
    masses = np.full(len(locs), 3.0**-depth)
    return DiscreteMeasure(depth, locs, masses)


@dataclass(frozen=True)
class LloydConfig:
    tol: float = 1e-12
    max_iter: int = 10_000
    restarts: int = 64
    rng_seed: int = 0

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1 or self.restarts < 1:
            raise ValueError("max_iter and restarts must be >= 1")


@dataclass
class LloydResult:
    codebook: np.ndarray
    discrete_distortion: float
    iterations: int
    converged: bool
    history: list[float] = field(default_factory=list)
    reseeds: int = 0


def assign(locations: np.ndarray, codebook: np.ndarray) -> np.ndarray:
    """Nearest-center labels for sorted codebook; ties go to the lower index."""
    bounds = (codebook[:-1] + codebook[1:]) / 2
    return np.searchsorted(bounds, locations, side="left")


def discrete_distortion(m: DiscreteMeasure, codebook: Sequence[float]) -> float:
    c = np.sort(np.asarray(codebook, dtype=float))
    labels = assign(m.locations, c)
    return float(np.sum(m.masses * (m.locations - c[labels]) ** 2))


def discrete_distortion_exact(depth: int, codebook: Sequence) -> Fraction:
    """Same quantity in rational arithmetic, for the exact gap identity."""
    c = sorted(Fraction(x) for x in codebook)
    bounds = [(a + b) / 2 for a, b in zip(c, c[1:])]
    total = Fraction(0)
    i = 0
    for x in _exact_atoms(depth):  # increasing, so a single sweep suffices
        while i < len(bounds) and bounds[i] < x:
            i += 1
        total += (x - c[i]) ** 2
    return total / 3**depth


def lloyd_run(m: DiscreteMeasure, init: Sequence[float], cfg: LloydConfig = LloydConfig()) -> LloydResult:
    """Alternate nearest-atom assignment and centroid update until points move less than tol.

    A center whose cell empties is moved onto the atom contributing most to the
    current distortion.
    """
    c = np.sort(np.asarray(init, dtype=float))
    if c.size == 0:
        raise ValueError("empty initial codebook")
    if c[0] < 0 or c[-1] > 1:
        raise ValueError("initial codebook must lie in [0, 1]")
    x, w = m.locations, m.masses
    n = c.size
    history: list[float] = []
    reseeds = 0
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        labels = assign(x, c)
        history.append(float(np.sum(w * (x - c[labels]) ** 2)))
        mass = np.bincount(labels, weights=w, minlength=n)
        moment = np.bincount(labels, weights=w * x, minlength=n)
        new = c.copy()
        filled = mass > 0
        new[filled] = moment[filled] / mass[filled]
        if not filled.all():
            err = w * (x - c[labels]) ** 2
            for j in np.flatnonzero(~filled):
                worst = int(np.argmax(err))
                new[j] = x[worst]
                err[worst] = -1.0
                reseeds += 1
        new.sort()
        shift = float(np.max(np.abs(new - c)))
        c = new
        if shift < cfg.tol:
            converged = True
            break
    labels = assign(x, c)
    final = float(np.sum(w * (x - c[labels]) ** 2))
    history.append(final)
    return LloydResult(c, final, it, converged, history, reseeds)


def _better(a: LloydResult, b: LloydResult, rel: float = 1e-12) -> bool:
    """Order by distortion; near-ties (float noise) fall back to the codebook itself."""
    if a.discrete_distortion < b.discrete_distortion * (1 - rel):
        return True
    if b.discrete_distortion < a.discrete_distortion * (1 - rel):
        return False
    return tuple(a.codebook) < tuple(b.codebook)


def best_of_restarts(n: int, depth: int, cfg: LloydConfig = LloydConfig()) -> LloydResult:
    """Best Lloyd fixed point over ``cfg.restarts`` seeded random initialisations."""
    m = discretize(depth)
    if n > len(m):
        raise ValueError(f"n={n} exceeds the {len(m)} atoms at depth {depth}")
    rng = np.random.default_rng(cfg.rng_seed)
    best = None
    for _ in range(cfg.restarts):
        init = rng.choice(m.locations, size=n, replace=False)
        res = lloyd_run(m, init, cfg)
        if best is None or _better(res, best):
            best = res
    return best


def gap_correction(depth: int) -> Fraction:
    """Distortion lost by collapsing each level-d cylinder to its centroid: V / 25^d."""
    return TRIADIC.variance / Fraction(25) ** depth


def boundaries_in_gaps(codebook: Sequence, depth: int) -> bool:
    """True when no Voronoi boundary falls strictly inside a level-``depth`` cylinder."""
    c = sorted(Fraction(x) for x in codebook)
    s = Fraction(1, 5**depth)
    for a, b in zip(c, c[1:]):
        mid = (a + b) / 2
        if not 0 < mid < 1:
            continue
        # level-d cylinders start at points whose base-5 digits (d of them) are all even
        cell = mid / s
        k = cell.numerator // cell.denominator
        if k == cell:
            continue
        if all(d % 2 == 0 for d in _base5_digits(k, depth)):
            return False
    return True


def _base5_digits(k: int, depth: int) -> list[int]:
    out = []
    for _ in range(depth):
        out.append(k % 5)
        k //= 5
    return out
