import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cantorq.distortion import (
    CHECKPOINT_REFERENCE,
    V,
    V2,
    V3,
    balanced_partitions,
    checkpoint_matches,
    codebook_distortion,
    proof_checkpoint_integrals,
    splitting_identity_check,
    vn_exact,
)
from cantorq.measure import TRIADIC, CylinderUnion, map_apply, union_distortion_about
from cantorq.quantizers import all_optimal_quantizers, optimal_quantizer

from conftest import ORACLE_DEPTH


def atomic_codebook_distortion(locs, points):
    """Depth-12 atoms assigned to the nearest point; misses exactly V/25^12 when no cell boundary cuts an atom's cylinder."""
    import numpy as np

    pts = np.array(sorted(float(p) for p in points))
    mids = (pts[1:] + pts[:-1]) / 2
    idx = np.searchsorted(mids, locs, side="left")
    return float(np.mean((locs - pts[idx]) ** 2))


class TestVn:
    @pytest.mark.parametrize("n, value", [(1, F(1, 9)), (2, F(821, 28125)), (3, F(1, 225)), (9, F(1, 5625)),
                                          (4, F(2357, 703125))])
    def test_examples(self, n, value):
        assert vn_exact(n) == value

    def test_n4_reduced_form(self):
        # 7071/2109375 reduces by 3 to 2357/703125
        assert vn_exact(4) == F(7071, 2109375)
        assert vn_exact(4) == codebook_distortion(optimal_quantizer(4, ["3"]).points).value

    def test_v2_v3(self):
        assert (V2, V3) == (F(821, 28125), F(1, 225))

    @pytest.mark.parametrize("n", [0, -3])
    def test_domain(self, n):
        with pytest.raises(ValueError):
            vn_exact(n)

    def test_monotone(self):
        vals = [vn_exact(n) for n in range(1, 1002)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_scaling(self):
        for n in range(1, 301):
            assert vn_exact(3 * n) == vn_exact(n) / 25

    @pytest.mark.parametrize("ell", range(0, 9))
    def test_powers_of_three(self, ell):
        assert vn_exact(3**ell) == V / 25**ell

    @pytest.mark.parametrize("ell", range(0, 7))
    def test_regime_boundary(self, ell):
        n, cap = 2 * 3**ell, 3**ell
        formula_a = ((2 * cap - n) * V + (n - cap) * V2) / F(75) ** ell
        formula_b = ((3 * cap - n) * V2 + (n - 2 * cap) * V3) / F(75) ** ell
        assert formula_a == formula_b == V2 / 25**ell == vn_exact(n)

    def test_consistency_constants(self):
        assert 2 * V - V2 == F(5429, 28125)
        assert V - V2 == F(2304, 28125)
        assert round(float(3 * V / V2), 3) == 11.419


class TestCodebookDistortion:
    def test_single_point(self):
        r = codebook_distortion([F(1, 2)])
        assert r.exact and r.value == F(1, 9)

    def test_half_split(self):
        r = codebook_distortion([F(3, 14), F(11, 14)])
        assert r.exact and r.value == F(13, 441)
        assert r.value > V2

    def test_alpha2(self):
        r = codebook_distortion([F(9, 50), F(189, 250)])
        assert r.exact and r.value == F(821, 28125)

    def test_gap_boundary(self):
        r = codebook_distortion([F(1, 10), F(2, 5)])
        expected = union_distortion_about(CylinderUnion.of("1"), F(1, 10)) + union_distortion_about(
            CylinderUnion.of("2", "3"), F(2, 5)
        )
        assert r.exact and r.value == expected == F(41, 450)

    def test_order_and_duplicates_ignored(self):
        a = codebook_distortion([F(189, 250), F(9, 50), F(9, 50)])
        assert a.value == V2

    def test_points_outside_unit_interval(self):
        r = codebook_distortion([F(-1), F(1, 2)])
        assert r.value == V
        assert r.empty_cells == (0,)

    def test_empty_cell_in_gap(self):
        # the cell of 3/10 is (1/5, 2/5], which P does not charge
        r = codebook_distortion([F(1, 10), F(3, 10), F(1, 2), F(9, 10)])
        assert r.empty_cells == (1,)
        assert r.value == V3

    def test_errors(self):
        with pytest.raises(ValueError):
            codebook_distortion([])
        with pytest.raises(ValueError):
            codebook_distortion([F(1, 2)], depth_cap=0)
        with pytest.raises(TypeError):
            codebook_distortion([0.5])

    @pytest.mark.parametrize("n", range(1, 19))
    def test_constructed_sets_match_closed_form(self, n):
        for q in all_optimal_quantizers(n):
            assert codebook_distortion(q.points).value == vn_exact(n)

    @pytest.mark.parametrize("n", range(1, 31))
    def test_oracle_dominance(self, n):
        rng = random.Random(1000 + n)
        base = optimal_quantizer(n).points
        den = 7919 * 10**6
        for _ in range(10):
            pert = [p + F(rng.randint(-10**4, 10**4), den) for p in base]
            if len(set(pert)) < n:
                continue
            r = codebook_distortion(pert)
            assert r.exact
            assert r.value >= vn_exact(n)
            if tuple(sorted(pert)) != base:
                assert r.value > vn_exact(n)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=997), min_size=1, max_size=6, unique=True))
    def test_agrees_with_atomic_oracle(self, atoms12, pts):
        r = codebook_distortion(pts)
        approx = atomic_codebook_distortion(atoms12, pts)
        # a boundary cutting a depth-12 cylinder costs at most its mass * width^2
        slack = 2 * len(pts) * 3.0**-ORACLE_DEPTH * 25.0**-ORACLE_DEPTH + float(V) / 25**ORACLE_DEPTH
        assert float(r.lower) - slack - 1e-13 <= approx <= float(r.upper) + slack + 1e-13


def _fixed_point(word):
    c = map_apply(TRIADIC, word, F(0))
    return c / (1 - F(1, 5) ** len(word))


class TestBounds:
    """A boundary on a Cantor point whose period is too long to detect falls back to bounds."""

    word = (1, 3) * 33 + (2,) * 4  # period 70 > MAX_PERIOD

    def codebook(self):
        y = _fixed_point(self.word)
        return [y - F(1, 100), y + F(1, 100)]

    def test_periodic_boundary_resolved(self):
        y = _fixed_point((1, 3))
        r = codebook_distortion([y - F(1, 20), y + F(1, 20)])
        assert r.exact

    def test_bounds_bracket(self, atoms12):
        pts = self.codebook()
        prev = None
        for cap in (4, 8, 12, 20):
            r = codebook_distortion(pts, depth_cap=cap)
            assert not r.exact and r.depth_used == cap
            assert r.lower <= r.upper
            with pytest.raises(ValueError):
                r.value
            if prev is not None:
                assert prev.lower <= r.lower and r.upper <= prev.upper
            prev = r
        approx = atomic_codebook_distortion(atoms12, pts)
        assert float(prev.lower) - 1e-12 <= approx + float(V) / 25**ORACLE_DEPTH <= float(prev.upper) + 1e-12

    def test_bounds_width_shrinks(self):
        r = codebook_distortion(self.codebook(), depth_cap=20)
        assert r.upper - r.lower < F(1, 10**12)


class TestSplitting:
    @pytest.mark.parametrize("n, part", [(6, (2, 2, 2)), (9, (3, 3, 3)), (4, (2, 1, 1))])
    def test_examples(self, n, part):
        r = splitting_identity_check(n, part)
        assert r.holds and r.difference == 0

    def test_balanced_range(self):
        for n in range(3, 82):
            parts = balanced_partitions(n)
            assert parts
            for p in parts:
                assert splitting_identity_check(n, p).holds

    def test_unbalanced_strictly_worse(self):
        for n in range(3, 40):
            bp = balanced_partitions(n)
            for a in range(1, n - 1):
                for b in range(1, n - a):
                    part = (a, b, n - a - b)
                    if part not in bp:
                        assert splitting_identity_check(n, part).difference < 0

    @pytest.mark.parametrize("part", [(1, 1), (0, 2, 2), (1, 1, 1)])
    def test_bad_partition(self, part):
        with pytest.raises(ValueError):
            splitting_identity_check(4, part)


class TestCheckpoints:
    def test_all_match(self):
        vals = proof_checkpoint_integrals()
        assert set(vals) == set(CHECKPOINT_REFERENCE)
        for name, v in vals.items():
            assert checkpoint_matches(v, CHECKPOINT_REFERENCE[name]), name

    @pytest.mark.parametrize("name, value", [("J2J3_about_centroid", F(4, 135)), ("series_2n1_about_2/5", F(19, 18900)),
                                             ("right_half_about_centroid", F(13, 882)), ("level2_centroids", F(1, 5625))])
    def test_exact_rows(self, name, value):
        assert proof_checkpoint_integrals()[name] == value

    def test_decimal_rows_exceed_v2(self):
        vals = proof_checkpoint_integrals()
        for name, ref in CHECKPOINT_REFERENCE.items():
            if "/" not in ref:
                assert vals[name] > V2, name

    def test_matcher(self):
        assert checkpoint_matches(F(299851, 10**7), "0.0299851")
        assert not checkpoint_matches(F(299856, 10**7), "0.0299851")
        assert not checkpoint_matches(F(4, 135) + F(1, 10**30), "4/135")
