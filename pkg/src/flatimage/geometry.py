"""Planar convex geometry helpers.

Everything here works with any numeric type supporting exact ring
arithmetic and comparison (int, Fraction) and also accepts floats for
the sampled pipelines; no division is performed.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def cross(o, a, b):
    """Cross product (a - o) x (b - o)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_vertices(points: Iterable[Sequence]) -> tuple:
    """Vertices of the convex hull in counterclockwise order starting at
    the lexicographic minimum.  Collinear boundary points are dropped, so
    the result is strictly convex.  Degenerate inputs yield fewer than
    three vertices (a point or a segment)."""
    pts = sorted(set((p[0], p[1]) for p in points))
    if len(pts) <= 2:
        return tuple(pts)
    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    out = lower[:-1] + upper[:-1]
    if len(out) < 3:  # all input points collinear
        return (pts[0], pts[-1])
    return tuple(out)


class Polygon2D:
    """Strictly convex polygon: vertices counterclockwise, starting at
    the lexicographically smallest vertex, no repeated or collinear
    vertices.  Built from an arbitrary point cloud via its convex hull.
    Degenerate clouds (single point, collinear set) are kept as 1- or
    2-vertex polygons."""

    __slots__ = ("vertices",)

    def __init__(self, points: Iterable[Sequence]):
        self.vertices = tuple(hull_vertices(points))
        if not self.vertices:
            raise ValueError("polygon needs at least one point")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polygon2D):
            return NotImplemented
        return self.vertices == other.vertices

    __hash__ = None

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def contains(self, point) -> bool:
        """Whether the point lies in the closed polygon (works for the
        degenerate 1- and 2-vertex cases as well)."""
        vs = self.vertices
        if len(vs) == 1:
            return tuple(point) == vs[0]
        if len(vs) == 2:
            a, b = vs
            if cross(a, b, point) != 0:
                return False
            lo = (min(a[0], b[0]), min(a[1], b[1]))
            hi = (max(a[0], b[0]), max(a[1], b[1]))
            return lo[0] <= point[0] <= hi[0] and lo[1] <= point[1] <= hi[1]
        for i, a in enumerate(vs):
            b = vs[(i + 1) % len(vs)]
            if cross(a, b, point) < 0:
                return False
        return True

    def contains_polygon(self, other: "Polygon2D") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def __repr__(self) -> str:
        return f"Polygon2D({list(self.vertices)!r})"
