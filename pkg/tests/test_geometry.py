import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from flatimage.geometry import Polygon2D, hull_vertices


SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


def test_hull_of_square_with_interior():
    pts = SQUARE + [(Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 4), Fraction(3, 4))]
    assert set(hull_vertices(pts)) == set(SQUARE)


def test_collinear_points_dropped():
    pts = [(0, 0), (1, 1), (2, 2), (2, 0)]
    assert set(hull_vertices(pts)) == {(0, 0), (2, 2), (2, 0)}


def test_duplicates_collapse():
    pts = [(0, 0), (0, 0), (1, 0), (1, 0)]
    assert hull_vertices(pts) == ((0, 0), (1, 0))


def test_degenerate_single_point():
    assert hull_vertices([(3, 4), (3, 4)]) == ((3, 4),)


def test_ccw_starts_at_lexicographic_min():
    verts = hull_vertices(SQUARE)
    assert verts[0] == (0, 0)
    # counterclockwise: positive cross products all the way around
    n = len(verts)
    for i in range(n):
        o, a, b = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
        cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
        assert cross > 0


class TestContains:
    def test_triangle(self):
        tri = Polygon2D([(0, 0), (2, 0), (0, 2)])
        assert tri.contains((Fraction(1, 2), Fraction(1, 2)))
        assert tri.contains((1, 1))  # boundary counts
        assert tri.contains((0, 0))
        assert not tri.contains((2, 2))
        assert not tri.contains((-Fraction(1, 100), 0))

    def test_segment(self):
        seg = Polygon2D([(0, 0), (2, 2)])
        assert seg.contains((1, 1))
        assert seg.contains((Fraction(1, 2), Fraction(1, 2)))
        assert not seg.contains((1, 0))
        assert not seg.contains((3, 3))

    def test_point(self):
        pt = Polygon2D([(5, -1)])
        assert pt.contains((5, -1))
        assert not pt.contains((5, 0))

    def test_polygon_containment(self):
        outer = Polygon2D(SQUARE)
        inner = Polygon2D([(Fraction(1, 4), Fraction(1, 4)),
                           (Fraction(3, 4), Fraction(1, 4)),
                           (Fraction(1, 2), Fraction(3, 4))])
        assert outer.contains_polygon(inner)
        assert not inner.contains_polygon(outer)


coords = st.integers(-50, 50)
points = st.lists(st.tuples(coords, coords), min_size=1, max_size=25)


@given(points)
@settings(max_examples=80, deadline=None)
def test_hull_contains_all_inputs(pts):
    poly = Polygon2D(pts)
    for p in pts:
        assert poly.contains(p)


@given(points)
@settings(max_examples=80, deadline=None)
def test_hull_idempotent(pts):
    once = hull_vertices(pts)
    assert hull_vertices(once) == once


@given(points, st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_hull_order_invariant(pts, rng):
    shuffled = list(pts)
    rng.shuffle(shuffled)
    assert hull_vertices(shuffled) == hull_vertices(pts)


def test_exact_rational_coordinates():
    # near-collinear rationals that floats would misclassify
    eps = Fraction(1, 10 ** 40)
    pts = [(0, 0), (1, Fraction(1, 2)), (2, 1 + eps), (2, 0)]
    verts = hull_vertices(pts)
    assert (1, Fraction(1, 2)) not in verts
    pts2 = [(0, 0), (1, Fraction(1, 2) + eps), (2, 1), (2, 0)]
    assert (1, Fraction(1, 2) + eps) in hull_vertices(pts2)
