"""Critical x-values, sampling, labeling and hole counting.

The expected critical lists and label sets come from hand derivations
kept alongside the boundary oracles: the six fitness values and the 22
fitness labels, and the four pancake values with their five labels.
Slice-root positions used below (e.g. the six roots at x = 3/4 with
y = ±1/8 outermost) were computed independently with sympy before being
frozen here as plain assertions.
"""

from fractions import Fraction
from math import lcm

import pytest

from conftest import (U, V, W, X, Y, fitness_map, pancake_map,
                      perturbed_chebyshev_map, square_map)
from flatimage.algebra import iprim, isquarefree
from flatimage.boundary import BoundaryPair, FlatteningProblem, compute_boundary
from flatimage.errors import DegenerateInputError, UnboundedCellError
from flatimage.mvpoly import MvPoly, UvPoly
from flatimage.realroots import Coincident, compare_to_rational, isolate_roots
from flatimage.regions import (RegionLabel, Report, circle_point, count_holes,
                               critical_xvalues, flatten_report, label_point,
                               membership, sample_body, sample_boundary,
                               sphere_point)

SEED = 7

FITNESS_CRITICALS = (Fraction(-1, 2), Fraction(0), Fraction(16, 43),
                     Fraction(2, 5), Fraction(1, 2), Fraction(1))

# the 22 cells of the flattened ball, and the six not touched by the
# image of the sphere
FITNESS_LABELS = {
    (1, 1), (1, 2), (1, 3),
    (2, 1), (2, 2), (2, 3), (2, 4), (2, 5),
    (3, 1), (3, 2), (3, 3), (3, 4), (3, 5),
    (4, 1), (4, 2), (4, 3), (4, 4), (4, 5),
    (5, 1), (5, 2), (5, 4), (5, 5),
}
FITNESS_INTERIOR_ONLY = {(3, 1), (3, 5), (4, 1), (4, 5), (5, 1), (5, 5)}

PANCAKE_LABELS = {(1, 2), (1, 3), (2, 2), (2, 3), (3, 1)}


def slice_ints(f: MvPoly, xbar: Fraction) -> list:
    """Integer coefficient list of f(xbar, y), built independently of
    the module's internal slicing."""
    cols = [UvPoly.from_mvpoly(c, "x") if not c.is_zero() else UvPoly("x", [])
            for c in f.coefficients_in("y")]
    vals = [c(Fraction(xbar)) for c in cols]
    den = lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    while ints and ints[-1] == 0:
        ints.pop()
    return iprim(ints) if ints else []


@pytest.fixture(scope="module")
def fitness_bp() -> BoundaryPair:
    f, g = fitness_map()
    return compute_boundary(FlatteningProblem(f, g))


@pytest.fixture(scope="module")
def fitness_criticals(fitness_bp):
    return critical_xvalues(fitness_bp)


@pytest.fixture(scope="module")
def fitness_report() -> Report:
    f, g = fitness_map()
    return flatten_report(FlatteningProblem(f, g), 10_000, SEED)


@pytest.fixture(scope="module")
def pancake_report() -> Report:
    f, g = pancake_map()
    return flatten_report(FlatteningProblem(f, g, mode="pancake"), 3000, SEED)


@pytest.fixture(scope="module")
def lissajous23_report() -> Report:
    f, g = perturbed_chebyshev_map(Fraction(1, 10))
    return flatten_report(FlatteningProblem(f, g), 1500, SEED)


class TestCriticalXValues:
    def test_fitness_exact(self, fitness_criticals):
        vals = fitness_criticals.values
        assert len(vals) == 6
        for got, want in zip(vals, FITNESS_CRITICALS):
            assert got.is_rational() and got.value() == want

    def test_fitness_source_tags(self, fitness_criticals):
        by_value = {v.value(): src for v, src in
                    zip(fitness_criticals.values, fitness_criticals.sources)}
        # the factor (2x+1) of q also heads its y^4 coefficient
        assert "q-leading" in by_value[Fraction(-1, 2)]
        assert "p-discriminant" in by_value[Fraction(0)]
        # 16/43 survives as a pure crossing of the two curves
        assert by_value[Fraction(16, 43)] == frozenset({"pq-intersection"})
        assert "q-discriminant" in by_value[Fraction(1, 2)]

    def test_pancake_four_values(self):
        f, g = pancake_map()
        bp = compute_boundary(FlatteningProblem(f, g, mode="pancake"))
        crit = critical_xvalues(bp)
        assert len(crit.values) == 4
        a, b, c, d = crit.values
        # +-3*sqrt(3)/8 carry the defining polynomial 64t^2 - 27
        assert not a.is_rational() and tuple(a.defining) == (-27, 0, 64)
        assert compare_to_rational(a, Fraction(0)) < 0
        assert b.is_rational() and b.value() == Fraction(-1, 2)
        assert c.is_rational() and c.value() == 0
        assert not d.is_rational() and tuple(d.defining) == (-27, 0, 64)
        assert compare_to_rational(d, Fraction(0)) > 0

    def test_q_only_curve(self):
        f, g = perturbed_chebyshev_map(Fraction(1, 10))
        bp = compute_boundary(FlatteningProblem(f, g))
        assert bp.p is None
        crit = critical_xvalues(bp)
        assert len(crit.values) > 0
        assert all("p-" not in tag for src in crit.sources for tag in src)

    def test_y_free_curve_rejected(self):
        bp = BoundaryPair(p=None, q=X ** 2 - 1, diagnostics=None)
        with pytest.raises(DegenerateInputError, match="involve y"):
            critical_xvalues(bp)

    def test_shared_factor_rejected(self):
        bp = BoundaryPair(p=X - Y, q=(X - Y) * (X + Y), diagnostics=None)
        with pytest.raises(DegenerateInputError, match="common factor"):
            critical_xvalues(bp)


class TestLabelPoint:
    def test_origin_is_critical(self, fitness_bp, fitness_criticals):
        # phi(0,0,0) = (0,0) and x = 0 sits in the critical list
        out = label_point(fitness_bp, fitness_criticals, (0, 0))
        assert isinstance(out, Coincident)

    def test_cusp_point_is_coincident(self, fitness_bp, fitness_criticals):
        # phi(1/2,1/2,1/2) = (3/4, 1/8) lands exactly on the branch
        # curve x^3 = 27 y^2, so the honest answer is coincidence in
        # strip 5, not an interior label
        out = label_point(fitness_bp, fitness_criticals,
                          (Fraction(3, 4), Fraction(1, 8)))
        assert out == Coincident(index=5)

    def test_near_cusp_label(self, fitness_bp, fitness_criticals):
        pt = (Fraction(3, 4), Fraction(1, 8) - Fraction(1, 1000))
        out = label_point(fitness_bp, fitness_criticals, pt)
        assert out == RegionLabel(5, 5)
        assert out.l in {1, 2, 4, 5}

    def test_strip5_gap_cell(self, fitness_bp, fitness_criticals):
        # the band between the two middle roots is not part of the image
        out = label_point(fitness_bp, fitness_criticals,
                          (Fraction(3, 4), Fraction(0)))
        assert out == RegionLabel(5, 3)

    def test_strip5_slice_roots(self, fitness_bp):
        # six roots at x = 3/4, outermost pair exactly y = -+1/8 from p
        prod = fitness_bp.p * fitness_bp.q
        roots = isolate_roots(slice_ints(prod, Fraction(3, 4)))
        assert len(roots) == 6
        assert compare_to_rational(roots[0], Fraction(-1, 8)) == 0
        assert compare_to_rational(roots[-1], Fraction(1, 8)) == 0

    def test_above_all_roots_unbounded(self, fitness_bp, fitness_criticals):
        with pytest.raises(UnboundedCellError):
            label_point(fitness_bp, fitness_criticals,
                        (Fraction(3, 4), Fraction(1, 2)))

    def test_outside_all_strips_unbounded(self, fitness_bp,
                                          fitness_criticals):
        with pytest.raises(UnboundedCellError):
            label_point(fitness_bp, fitness_criticals, (-2, 0))

    def test_label_validation(self):
        with pytest.raises(ValueError):
            RegionLabel(0, 1)
        with pytest.raises(ValueError):
            RegionLabel(1, -3)


class TestSampleBody:
    def test_ball_point_exact(self):
        prob = FlatteningProblem(*fitness_map())
        (pt,) = sample_body(prob, 1, SEED)
        u, v, w = pt
        assert all(isinstance(c, Fraction) for c in pt)
        assert u * u + v * v + w * w <= 1

    def test_disk_points(self):
        f, g = pancake_map()
        prob = FlatteningProblem(f, g, mode="pancake")
        pts = sample_body(prob, 100, SEED)
        assert len(pts) == 100
        assert all(u * u + v * v <= 1 for u, v in pts)

    def test_determinism_and_prefix(self):
        prob = FlatteningProblem(*fitness_map())
        a = sample_body(prob, 9, SEED)
        assert a == sample_body(prob, 9, SEED)
        assert sample_body(prob, 5, SEED) == a[:5]
        assert sample_body(prob, 9, SEED + 1) != a

    def test_needs_a_sample(self):
        with pytest.raises(ValueError):
            sample_body(FlatteningProblem(*fitness_map()), 0, SEED)

    def test_tiny_body_rejected(self):
        h = Fraction(1, 10 ** 12) - U ** 2 - V ** 2 - W ** 2
        prob = FlatteningProblem(*fitness_map(), h=h)
        with pytest.raises(DegenerateInputError, match="rejection"):
            sample_body(prob, 1, SEED)


class TestSampleBoundary:
    def test_parametrization_anchors(self):
        assert sphere_point(0, 0) == (0, 0, -1)
        assert sphere_point(1, 0) == (1, 0, 0)
        assert circle_point(1) == (0, 1)

    def test_sphere_exact(self):
        prob = FlatteningProblem(*fitness_map())
        pts = sample_boundary(prob, 50, SEED)
        assert pts.exact and pts.tolerance is None
        assert len(pts) == 50
        assert all(u * u + v * v + w * w == 1 for u, v, w in pts)
        assert pts == sample_boundary(prob, 50, SEED)

    def test_circle_exact(self):
        f, g = pancake_map()
        prob = FlatteningProblem(f, g, mode="pancake")
        pts = sample_boundary(prob, 50, SEED)
        assert pts.exact
        assert all(u * u + v * v == 1 for u, v in pts)

    def test_nonstandard_body_fallback(self):
        h = 4 - U ** 2 - V ** 2 - W ** 2
        prob = FlatteningProblem(*fitness_map(), h=h)
        pts = sample_boundary(prob, 8, SEED)
        assert not pts.exact
        assert pts.tolerance == Fraction(1, 2 ** 48)
        for pt in pts:
            v = h.evaluate(dict(zip(("u", "v", "w"), pt)))
            assert abs(v) < Fraction(1, 10 ** 9)


class TestFlattenReport:
    def test_fitness_labels(self, fitness_report):
        got = {(lab.k, lab.l) for lab in fitness_report.labels_interior}
        assert got == FITNESS_LABELS
        diff = fitness_report.labels_interior - fitness_report.labels_boundary
        assert {(lab.k, lab.l) for lab in diff} == FITNESS_INTERIOR_ONLY

    def test_fitness_bookkeeping(self, fitness_report):
        used = fitness_report.samples_used
        assert used["interior"] + \
            fitness_report.diagnostics["coincident_dropped_interior"] == 10_000
        assert fitness_report.seed == SEED
        assert fitness_report.diagnostics["boundary_sampling"] == \
            "exact-parametrization"
        n_strips = len(fitness_report.criticals)
        assert all(1 <= lab.k < n_strips
                   for lab in fitness_report.labels_interior)

    def test_pancake_labels(self, pancake_report):
        got = {(lab.k, lab.l) for lab in pancake_report.labels_interior}
        assert got == PANCAKE_LABELS
        # the circle maps into V(q), so no boundary labels can exist
        assert pancake_report.labels_boundary == frozenset()
        assert pancake_report.samples_used["boundary"] == 0
        assert pancake_report.diagnostics["boundary_sampling"] == \
            "skipped-one-dimensional-boundary"
        assert pancake_report.diagnostics["intersection_values_pruned"] == 2

    def test_monotone_discovery(self):
        prob = FlatteningProblem(*fitness_map())
        small = flatten_report(prob, 600, SEED)
        large = flatten_report(prob, 1800, SEED)
        assert small.labels_interior <= large.labels_interior
        assert small.labels_boundary <= large.labels_boundary

    def test_worker_invariance(self):
        prob = FlatteningProblem(*fitness_map())
        reports = [flatten_report(prob, 800, SEED, workers=k)
                   for k in (1, 2, 8)]
        for other in reports[1:]:
            assert other.labels_interior == reports[0].labels_interior
            assert other.labels_boundary == reports[0].labels_boundary
            assert other.samples_used == reports[0].samples_used

    def test_boundary_rediscovered_by_body(self):
        prob = FlatteningProblem(*fitness_map())
        small = flatten_report(prob, 400, SEED)
        big = flatten_report(prob, 4000, SEED)
        assert small.labels_boundary <= big.labels_interior

    def test_argument_validation(self):
        prob = FlatteningProblem(*fitness_map())
        with pytest.raises(ValueError):
            flatten_report(prob, 0, SEED)
        with pytest.raises(ValueError):
            flatten_report(prob, 10, SEED, workers=0)


class TestStripInvariants:
    def test_strip_constancy(self, fitness_bp):
        prod = fitness_bp.p * fitness_bp.q
        probes = {
            1: (Fraction(-2, 5), Fraction(-1, 10)),
            2: (Fraction(1, 10), Fraction(3, 10)),
            3: (Fraction(7, 19), Fraction(15, 38)),
            4: (Fraction(41, 100), Fraction(49, 100)),
            5: (Fraction(3, 5), Fraction(9, 10)),
        }
        counts = {}
        for strip, (x1, x2) in probes.items():
            n1 = len(isolate_roots(slice_ints(prod, x1)))
            n2 = len(isolate_roots(slice_ints(prod, x2)))
            assert n1 == n2
            counts[strip] = n1
        assert counts[1] == 4
        assert counts[5] == 6

    def test_squarefree_slices(self, fitness_bp):
        # body samples avoid the measure-zero critical lines, so every
        # sampled product slice must stay squarefree
        prob = FlatteningProblem(*fitness_map())
        prod = fitness_bp.p * fitness_bp.q
        for pt in sample_body(prob, 30, SEED):
            xbar = prob.f.evaluate(dict(zip(("u", "v", "w"), pt)))
            ints = slice_ints(prod, xbar)
            assert len(ints) > 1 and isquarefree(ints)


class TestMembership:
    def test_interior_point(self, fitness_report):
        assert membership(fitness_report, (Fraction(1, 5), 0)) == "inside"
        near_cusp = (Fraction(3, 4), Fraction(1, 8) - Fraction(1, 1000))
        assert membership(fitness_report, near_cusp) == "inside"

    def test_outside_points(self, fitness_report):
        assert membership(fitness_report, (-2, 0)) == "outside"
        # valid cell (5,3), but no sample ever lands there: a gap
        assert membership(fitness_report, (Fraction(3, 4), 0)) == "outside"
        assert membership(fitness_report,
                          (Fraction(3, 4), Fraction(1, 2))) == "outside"

    def test_coincident_points(self, fitness_report):
        assert membership(fitness_report,
                          (Fraction(16, 43), 0)) == "boundary-coincident"
        on_cusp = (Fraction(3, 4), Fraction(1, 8))
        assert membership(fitness_report, on_cusp) == "boundary-coincident"


class TestCountHoles:
    def test_fitness_no_holes(self, fitness_report):
        window = (Fraction(-1), Fraction(3, 2), Fraction(-1), Fraction(1))
        assert count_holes(fitness_report, window, 64) == 0

    def test_thickened_curve_one_hole(self, lissajous23_report):
        w = Fraction(6, 5)
        assert count_holes(lissajous23_report, (-w, w, -w, w), 128) == 1

    def test_validation(self, fitness_report):
        window = (Fraction(-1), Fraction(3, 2), Fraction(-1), Fraction(1))
        with pytest.raises(ValueError, match="resolution"):
            count_holes(fitness_report, window, 31)
        with pytest.raises(ValueError, match="window"):
            count_holes(fitness_report, (1, 1, -1, 1), 64)
