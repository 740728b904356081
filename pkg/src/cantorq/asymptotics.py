"""Quantization dimension and the oscillation of n^(2/beta) V_n.

On regime A (3^l <= n <= 2*3^l) the scaled error is exactly f(n/3^l); on regime B
it is g(n/3^l). Neither has a limit, so the beta-dimensional quantization
coefficient does not exist. Floats here are mpmath ``mpf`` at ``DEFAULT_DPS`` digits.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .distortion import V, V2, V3, vn_exact
from .quantizers import Regime, regime_of

DEFAULT_DPS = 50

# private context so callers' mpmath settings are neither used nor disturbed
mp = mpmath.MPContext()
mp.dps = DEFAULT_DPS
mpf = mp.mpf

# f(x) = x^(2/beta) * ((2V - V2) - x (V - V2))
F_CONST = 2 * V - V2
F_SLOPE = V - V2


def _q(x: Fraction) -> mpf:
    return mpf(x.numerator) / x.denominator


def beta(dps: int = DEFAULT_DPS) -> mpf:
    """log 3 / log 5: similarity dimension of the Cantor set, also its quantization dimension."""
    with mp.workdps(dps + 10):
        b = mp.log(3) / mp.log(5)
    with mp.workdps(dps):
        return +b


def exponent(dps: int = DEFAULT_DPS) -> mpf:
    """2 / beta."""
    with mp.workdps(dps + 10):
        e = 2 * mp.log(5) / mp.log(3)
    with mp.workdps(dps):
        return +e


def _f_expr(x) -> mpf:
    with mp.workdps(DEFAULT_DPS + 10):
        x = mpf(x)
        return x ** exponent(DEFAULT_DPS + 10) * (_q(F_CONST) - x * _q(F_SLOPE))


def f(x) -> mpf:
    x = mpf(x)
    if not 1 <= x <= 2:
        raise ValueError(f"f is defined on [1, 2], got {x}")
    return +_f_expr(x)


def f_prime(x) -> mpf:
    """Closed-form derivative x^(2/b - 1) (10858 - 2304 (b + 2) x) / (28125 b)."""
    with mp.workdps(DEFAULT_DPS + 10):
        x = mpf(x)
        b = beta(DEFAULT_DPS + 10)
        e = 2 / b
        d = x ** (e - 1) * (e * _q(F_CONST) - (e + 1) * _q(F_SLOPE) * x)
    return +d


def f_prime_fd(x, h=mpf("1e-8")) -> mpf:
    """Central difference of the defining expression (analytic across the ends of [1, 2])."""
    with mp.workdps(DEFAULT_DPS + 10):
        x, h = mpf(x), mpf(h)
        d = (_f_expr(x + h) - _f_expr(x - h)) / (2 * h)
    return +d


def f_argmax() -> mpf:
    """Stationary point of f: (2V - V2) * (2/b) / ((V - V2) (2/b + 1)), i.e. 5429 / (1152 (b + 2))."""
    with mp.workdps(DEFAULT_DPS + 10):
        b = beta(DEFAULT_DPS + 10)
        x = _q(F_CONST) * 2 / (_q(F_SLOPE) * (b + 2))
    return +x


def g(x) -> mpf:
    """Regime-B counterpart of f on [2, 3]: x^(2/beta) ((3 - x) V2 + (x - 2) V3)."""
    x = mpf(x)
    if not 2 <= x <= 3:
        raise ValueError(f"g is defined on [2, 3], got {x}")
    with mp.workdps(DEFAULT_DPS + 10):
        v = x ** exponent(DEFAULT_DPS + 10) * ((3 - x) * _q(V2) + (x - 2) * _q(V3))
    return +v


@dataclass(frozen=True)
class OscillationProfile:
    f_at_1: mpf
    f_at_2: mpf
    f_max: mpf
    argmax_x: mpf

    @property
    def accumulation_interval(self) -> tuple[mpf, mpf]:
        return self.f_at_1, self.f_max


def oscillation_profile() -> OscillationProfile:
    x = f_argmax()
    return OscillationProfile(f(1), f(2), f(x), x)


@dataclass(frozen=True)
class ScanRow:
    n: int
    ell: int
    regime: str
    x: mpf
    scaled_error: mpf


def scaled_error(n: int, dps: int = DEFAULT_DPS) -> mpf:
    with mp.workdps(dps + 10):
        v = mpf(n) ** exponent(dps + 10) * _q(vn_exact(n))
    with mp.workdps(dps):
        return +v


def _row(n: int, dps: int) -> ScanRow:
    if n == 1:
        return ScanRow(1, 0, "A", mpf(1), scaled_error(1, dps))
    if n == 2:
        # 3^0 <= 2 <= 2*3^0: regime A at level 0
        return ScanRow(2, 0, "A", mpf(2), scaled_error(2, dps))
    rd = regime_of(n)
    with mp.workdps(dps):
        x = mpf(n) / 3**rd.ell
    return ScanRow(n, rd.ell, rd.regime.value, x, scaled_error(n, dps))


def scan_scaled_errors(n_min: int, n_max: int, dps: int = DEFAULT_DPS) -> list[ScanRow]:
    if not 1 <= n_min <= n_max:
        raise ValueError(f"need 1 <= n_min <= n_max, got {n_min}, {n_max}")
    return [_row(n, dps) for n in range(n_min, n_max + 1)]


@dataclass(frozen=True)
class SubsequenceRow:
    ell: int
    n: int
    scaled_error: mpf
    deviation: mpf


@dataclass(frozen=True)
class SubsequenceReport:
    x: mpf
    target: mpf
    rows: list[SubsequenceRow]

    @property
    def final_deviation(self) -> mpf:
        return self.rows[-1].deviation

    def rate_constants(self) -> list[mpf]:
        """deviation * 3^l for each row; bounded when the deviation is O(3^-l)."""
        return [r.deviation * 3**r.ell for r in self.rows]


def subsequence_limit_check(x, ell_max: int = 10) -> SubsequenceReport:
    """Scaled errors along n_l = floor(x 3^l), compared with f(x)."""
    x = mpf(x)
    if not 1 <= x <= 2:
        raise ValueError(f"x must be in [1, 2], got {x}")
    if not 1 <= ell_max <= 12:
        raise ValueError("ell_max must be in 1..12")
    target = f(x)
    rows = []
    for ell in range(1, ell_max + 1):
        n = int(mp.floor(x * 3**ell))
        se = scaled_error(n)
        rows.append(SubsequenceRow(ell, n, se, abs(se - target)))
    return SubsequenceReport(x, target, rows)


def three_v_over_v2() -> Fraction:
    return 3 * V / V2


def regime_formula(n: int) -> mpf:
    """f or g evaluated at n/3^l, whichever applies."""
    rd = regime_of(n)
    with mp.workdps(DEFAULT_DPS + 10):
        x = mpf(n) / 3**rd.ell
    return f(x) if rd.regime is Regime.A else g(x)
