"""Generic-curve prediction formulas and instance comparison."""

import pytest

from conftest import fitness_map, quadric_map, perturbed_chebyshev_map
from flatimage import analysis
from flatimage.analysis import (DegreeProfile, degree_bound, lattice_count,
                                predictions, verify_instance)
from flatimage.boundary import FlatteningProblem, compute_boundary
from flatimage.geometry import Polygon2D

# (d1, d2, e) -> deg_p, genus_p, sing_p, deg_q, genus_q, sing_q
REFERENCE_TABLE = [
    ((1, 2, 2), 2, 0, 0, 8, 1, 8),
    ((1, 3, 2), 12, 1, 14, 18, 4, 36),
    ((2, 2, 2), 6, 0, 10, 12, 4, 51),
    ((2, 3, 2), 21, 5, 122, 24, 9, 160),
    ((2, 4, 2), 52, 21, 604, 40, 16, 345),
    ((3, 3, 2), 36, 17, 578, 30, 16, 390),
    ((3, 4, 2), 76, 43, 2048, 48, 25, 792),
    ((4, 4, 2), 108, 82, 5589, 56, 36, 1449),
]


class TestDegreeProfile:
    def test_validation(self):
        with pytest.raises(ValueError, match="d1"):
            DegreeProfile(0, 2, 2)
        with pytest.raises(ValueError, match="d2"):
            DegreeProfile(2, -1, 2)
        with pytest.raises(ValueError, match="e"):
            DegreeProfile(2, 3, 0)

    def test_from_problem_tuple(self):
        prob = FlatteningProblem(*fitness_map())
        assert DegreeProfile(*prob.degree_profile) == DegreeProfile(2, 3, 2)


class TestPredictions:
    @pytest.mark.parametrize(
        "profile,deg_p,genus_p,sing_p,deg_q,genus_q,sing_q", REFERENCE_TABLE)
    def test_reference_table(self, profile, deg_p, genus_p, sing_p,
                             deg_q, genus_q, sing_q):
        pred = predictions(DegreeProfile(*profile))
        assert pred.deg_p == deg_p
        assert pred.genus_p == genus_p
        assert pred.sing_p == sing_p
        assert pred.deg_q == deg_q
        assert pred.genus_q == genus_q
        assert pred.sing_q == sing_q

    def test_scale_factors_and_triangles(self):
        pred = predictions(DegreeProfile(2, 3, 2))
        assert pred.D_p == 7 and pred.D_q == 8
        assert pred.newt_p == Polygon2D([(0, 0), (21, 0), (0, 14)])
        assert pred.newt_q == Polygon2D([(0, 0), (24, 0), (0, 16)])
        pred222 = predictions(DegreeProfile(2, 2, 2))
        assert pred222.newt_p == Polygon2D([(0, 0), (6, 0), (0, 6)])
        assert pred222.newt_q == Polygon2D([(0, 0), (12, 0), (0, 12)])

    def test_internal_consistency_sweep(self):
        for d1 in range(1, 7):
            for d2 in range(1, 7):
                for e in range(1, 7):
                    pred = predictions(DegreeProfile(d1, d2, e))
                    assert pred.deg_p == pred.D_p * max(d1, d2)
                    assert pred.deg_q == pred.D_q * max(d1, d2)
                    assert pred.sing_p >= 0
                    assert pred.sing_q >= 0
                    if pred.D_p >= 1:
                        interior = lattice_count(pred.D_p, d1, d2, "interior")
                        assert pred.sing_p == interior - pred.genus_p
                    if pred.D_q >= 1:
                        interior = lattice_count(pred.D_q, d1, d2, "interior")
                        assert pred.sing_q == interior - pred.genus_q

    def test_rational_branch_degree_two_has_genus_zero(self):
        # maps with quadratic second component give a rational p
        for d1 in (1, 2):
            assert predictions(DegreeProfile(d1, 2, 2)).genus_p == 0

    def test_half_integer_guard(self):
        with pytest.raises(ArithmeticError, match="half-integer"):
            analysis._exact_half(3, "probe")


class TestDegreeBound:
    def test_reference_values(self):
        assert degree_bound(DegreeProfile(2, 3, 2)) == 45
        assert degree_bound(DegreeProfile(2, 2, 2)) == 18
        # degenerate all-linear profile: both scale factors vanish, so
        # the boundary degree bound collapses to zero
        assert degree_bound(DegreeProfile(1, 1, 1)) == 0

    def test_equals_sum_of_curve_degrees(self):
        for row in REFERENCE_TABLE:
            profile = DegreeProfile(*row[0])
            pred = predictions(profile)
            assert degree_bound(profile) == pred.deg_p + pred.deg_q
            assert degree_bound(profile) == row[1] + row[4]


def brute_count(r, d1, d2, interior):
    bound = r * d1 * d2
    total = 0
    for i in range(r * d2 + 1):
        for j in range(r * d1 + 1):
            s = i * d1 + j * d2
            if interior:
                total += 1 if (i > 0 and j > 0 and s < bound) else 0
            else:
                total += 1 if s <= bound else 0
    return total


class TestLatticeCount:
    def test_reference_triangles(self):
        assert lattice_count(7, 2, 3, "interior") == 127
        assert lattice_count(7, 2, 3, "all") == 169
        assert lattice_count(8, 2, 3, "all") == 217

    def test_against_enumeration(self):
        cases = [(r, d1, d2) for r in range(1, 7)
                 for d1 in range(1, 6) for d2 in range(1, 6)]
        cases += [(7, 2, 3), (8, 2, 3), (14, 4, 4), (12, 5, 4)]
        for r, d1, d2 in cases:
            assert lattice_count(r, d1, d2, "all") == brute_count(
                r, d1, d2, False)
            assert lattice_count(r, d1, d2, "interior") == brute_count(
                r, d1, d2, True)

    def test_validation(self):
        with pytest.raises(ValueError):
            lattice_count(0, 2, 3)
        with pytest.raises(ValueError, match="mode"):
            lattice_count(1, 2, 3, "boundary")


class TestVerifyInstance:
    def test_special_map_reports_deviations(self):
        bp = compute_boundary(FlatteningProblem(*fitness_map()))
        record = verify_instance(bp, DegreeProfile(2, 3, 2))
        assert not record.generic
        assert "deg p = 3 != 21" in record.p.deviations
        assert record.p.support_relation == "strictly-contained"
        assert "deg p = 3 != 21" in record.verdict

    def test_generic_quadrics_match(self):
        bp = compute_boundary(FlatteningProblem(*quadric_map()))
        record = verify_instance(bp, DegreeProfile(2, 2, 2))
        assert record.generic
        assert record.verdict == "matches generic predictions"
        assert record.p.support_relation == "equal"
        assert record.q.support_relation == "equal"
        assert record.p.actual_terms == record.p.predicted_terms == 28
        assert record.q.actual_terms == record.q.predicted_terms == 91

    def test_absent_curve(self):
        f, g = perturbed_chebyshev_map()
        bp = compute_boundary(FlatteningProblem(f, g))
        record = verify_instance(bp, DegreeProfile(2, 3, 2))
        assert record.p.support_relation == "absent"
        assert "p does not exist" in record.verdict
        assert record.p.actual_degree is None
