from decimal import Decimal, localcontext
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorq.asymptotics import (
    F_CONST,
    F_SLOPE,
    beta,
    exponent,
    f,
    f_argmax,
    f_prime,
    f_prime_fd,
    g,
    mp,
    mpf,
    oscillation_profile,
    regime_formula,
    scan_scaled_errors,
    scaled_error,
    subsequence_limit_check,
    three_v_over_v2,
)
from cantorq.distortion import V, V2, V3


def dec_power(x: F, coeff: F) -> Decimal:
    """coeff * x^(2 log5/log3) with the stdlib decimal module, as an oracle independent of mpmath."""
    with localcontext() as ctx:
        ctx.prec = 40
        e = 2 * Decimal(5).ln() / Decimal(3).ln()
        xd = Decimal(x.numerator) / Decimal(x.denominator)
        return (e * xd.ln()).exp() * Decimal(coeff.numerator) / Decimal(coeff.denominator)


class TestBeta:
    def test_value(self):
        assert abs(beta() - mpf("0.6826061944859854")) < 1e-15
        assert abs(exponent() - mpf("2.9299470414358537")) < 1e-15
        assert abs(exponent() * beta() - 2) < mpf(10) ** -45

    def test_self_similarity(self):
        assert abs(mpf(3) ** (1 / beta()) - 5) < mpf(10) ** -45

    def test_precision_argument(self):
        assert abs(beta(80) - beta()) < mpf(10) ** -48

    def test_global_context_untouched(self):
        import mpmath

        before = mpmath.mp.dps
        f(mpf("1.5"))
        assert mpmath.mp.dps == before


class TestF:
    def test_coefficients(self):
        assert F_CONST * 28125 == 5429 and F_SLOPE * 28125 == 2304

    def test_f1(self):
        assert abs(f(1) - mpf(1) / 9) < mpf(10) ** -48

    def test_f2(self):
        assert abs(f(2) - mpf("0.22246")) < 5e-4
        oracle = dec_power(F(2), V2)
        assert abs(f(2) - mpf(str(oracle))) < 1e-12
        # with more digits, 0.22246 is the correct 5-digit rounding
        assert mp.nstr(f(2), 5) == "0.22246"

    def test_f2_equals_oracle_everywhere(self):
        for x in (F(1), F(5, 4), F(3, 2), F(7, 4), F(2)):
            val = dec_power(x, F_CONST - x * F_SLOPE)
            assert abs(f(mpf(x.numerator) / x.denominator) - mpf(str(val))) < mpf(10) ** -35

    @pytest.mark.parametrize("x", [0.999, 2.001, 0, -1, 3])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            f(x)

    def test_argmax(self):
        x = f_argmax()
        assert abs(x - mpf("1.75675")) < 1e-5
        assert abs(x - mpf(5429) / (1152 * (beta() + 2))) < mpf(10) ** -45
        assert abs(f_prime(x)) < mpf(10) ** -45

    def test_local_maximum(self):
        x = f_argmax()
        assert f(x - mpf("1e-6")) < f(x) and f(x + mpf("1e-6")) < f(x)

    def test_argmax_value(self):
        assert abs(f(f_argmax()) - mpf("0.25599367830693")) < 1e-13

    @pytest.mark.parametrize("x, ref", [(1, "0.24363"), (2, "-0.298399")])
    def test_derivative_endpoints(self, x, ref):
        assert abs(f_prime_fd(x) - mpf(ref)) < 1e-4
        assert abs(f_prime(x) - mpf(ref)) < 1e-4

    @settings(max_examples=50)
    @given(st.fractions(min_value=1, max_value=2, max_denominator=10**4))
    def test_derivative_agreement(self, x):
        xm = mpf(x.numerator) / x.denominator
        assert abs(f_prime(xm) - f_prime_fd(xm)) < 1e-12

    def test_profile_order(self):
        p = oscillation_profile()
        assert p.f_at_1 < p.f_at_2 < p.f_max
        assert 1 < p.argmax_x < 2
        assert p.accumulation_interval == (p.f_at_1, p.f_max)


class TestG:
    def test_joins_f_at_2(self):
        assert abs(g(2) - f(2)) < mpf(10) ** -30

    def test_wraps_to_f1(self):
        assert 25 * V3 == V
        assert abs(g(3) - f(1)) < mpf(10) ** -30

    def test_midpoint(self):
        # g rises past g(2) before falling back to 1/9
        assert abs(g(mpf("2.5")) - mpf("0.2464403181")) < 1e-10
        assert g(3) < g(2) < g(mpf("2.5"))

    def test_unimodal_on_grid(self):
        xs = [2 + mpf(k) / 200 for k in range(201)]
        vals = [g(x) for x in xs]
        top = max(range(len(vals)), key=vals.__getitem__)
        assert 0 < top < 200
        assert all(a < b for a, b in zip(vals[:top], vals[1 : top + 1]))
        assert all(a > b for a, b in zip(vals[top:], vals[top + 1 :]))
        assert vals[top] < f(f_argmax())

    @pytest.mark.parametrize("x", [1.9, 3.1])
    def test_domain(self, x):
        with pytest.raises(ValueError):
            g(x)


@pytest.fixture(scope="module")
def rows():
    return scan_scaled_errors(1, 3**8)


class TestScan:
    def test_row_shape(self, rows):
        assert [r.n for r in rows] == list(range(1, 3**8 + 1))
        assert rows[0].ell == 0 and rows[1].regime == "A"
        assert all(1 <= r.x < 3 and r.scaled_error > 0 for r in rows)

    def test_matches_f_or_g(self, rows):
        for r in rows[2:]:
            assert abs(r.scaled_error - regime_formula(r.n)) < mpf(10) ** -40, r.n

    def test_powers_of_three(self, rows):
        for ell in range(9):
            assert abs(rows[3**ell - 1].scaled_error - mpf(1) / 9) < mpf(10) ** -45

    def test_twice_powers_of_three(self, rows):
        for ell in range(8):
            assert abs(rows[2 * 3**ell - 1].scaled_error - f(2)) < mpf(10) ** -40

    def test_bracket(self, rows):
        lo, hi = mpf(1) / 9, f(f_argmax())
        assert all(lo - 1e-12 <= r.scaled_error <= hi + 1e-12 for r in rows)
        assert abs(min(r.scaled_error for r in rows) - lo) < 1e-3
        assert abs(max(r.scaled_error for r in rows) - hi) < 1e-3

    def test_argmax_location(self, rows):
        window = rows[3**6 - 1 : 2 * 3**6]
        best = max(window, key=lambda r: r.scaled_error)
        assert abs(best.n - round(1.75675 * 3**6)) <= 1

    def test_bad_range(self):
        with pytest.raises(ValueError):
            scan_scaled_errors(0, 5)
        with pytest.raises(ValueError):
            scan_scaled_errors(6, 5)

    def test_three_v_over_v2(self):
        assert abs(float(three_v_over_v2()) - 11.419) < 1e-3


class TestSubsequence:
    def test_x1_exact(self):
        rep = subsequence_limit_check(1)
        assert all(r.deviation < mpf(10) ** -45 for r in rep.rows)

    @pytest.mark.parametrize("x", ["1.2", "1.5", None])
    def test_convergence(self, x):
        xx = f_argmax() if x is None else mpf(x)
        rep = subsequence_limit_check(xx, ell_max=10)
        assert rep.final_deviation < 1e-3
        assert [r.ell for r in rep.rows] == list(range(1, 11))
        # O(3^-l): the scaled deviations stay bounded
        assert max(rep.rate_constants()[3:]) < 1

    def test_domain(self):
        with pytest.raises(ValueError):
            subsequence_limit_check(2.5)
        with pytest.raises(ValueError):
            subsequence_limit_check(1.5, ell_max=13)

    def test_scaled_error_small_n(self):
        assert abs(scaled_error(1) - mpf(1) / 9) < mpf(10) ** -45
        assert abs(scaled_error(2) - f(2)) < mpf(10) ** -45
