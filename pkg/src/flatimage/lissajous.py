"""Chebyshev polynomials, Lissajous curves, and the perturbed family.

A Lissajous curve is traced by (cos(d1*theta), cos(d2*theta)) for
coprime d1 < d2, or polynomially by (T_d1(t), T_d2(t)) with Chebyshev
polynomials T_d.  Thickening it through the map

    f = T_d1(u) + eps*v,   g = T_d2(u) + eps*w

on the unit ball produces a planar region whose complement has exactly
(d1-1)(d2-1)/2 + 1 connected components for small eps.  This module
builds the curve, its nodes, the map, and the outer boundary q through a
Sylvester-resultant shortcut that avoids the general elimination route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import cos, gcd, pi

from .algebra import canonicalize, newton_polygon, resultant, squarefree_part
from .boundary import FlatteningProblem
from .errors import DegenerateInputError
from .geometry import Polygon2D
from .mvpoly import MvPoly, UvPoly

__all__ = [
    "LissajousParams",
    "NodePair",
    "NewtonReport",
    "chebyshev",
    "lissajous_curve",
    "lissajous_nodes",
    "lissajous_problem",
    "lissajous_q",
]


@dataclass(frozen=True)
class LissajousParams:
    """Coprime frequencies d1 < d2 and the thickening radius eps."""

    d1: int
    d2: int
    eps: Fraction = Fraction(1, 10)

    def __post_init__(self):
        if not isinstance(self.d1, int) or not isinstance(self.d2, int):
            raise ValueError("d1 and d2 must be integers")
        if not 0 < self.d1 < self.d2:
            raise ValueError("frequencies must satisfy 0 < d1 < d2")
        if gcd(self.d1, self.d2) != 1:
            raise ValueError("d1 and d2 must be coprime")
        eps = Fraction(self.eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        object.__setattr__(self, "eps", eps)


@dataclass(frozen=True)
class NodePair:
    """One node of a Lissajous curve with its two parameter angles.

    theta_prime and theta_second are exact rational multiples of pi:
    theta' = pi*(k/d1 + l/d2) and theta'' = |pi*(l/d2 - k/d1)|.  Both
    angles hit the same curve point, whose float coordinates are x, y.
    """

    k: int
    l: int
    theta_prime: Fraction
    theta_second: Fraction
    x: float
    y: float


def chebyshev(d: int) -> UvPoly:
    """Degree-d Chebyshev polynomial T_d in t, by the exact recursion
    T_{d+1} = 2t*T_d - T_{d-1} from T_0 = 1, T_1 = t."""
    if not isinstance(d, int) or d < 0:
        raise ValueError("degree must be a nonnegative integer")
    if d == 0:
        return UvPoly("t", [1])
    prev, cur = [Fraction(1)], [Fraction(0), Fraction(1)]
    for _ in range(d - 1):
        shifted = [Fraction(0)] + [2 * c for c in cur]
        nxt = [a - b for a, b in
               zip(shifted, prev + [Fraction(0)] * (len(shifted) - len(prev)))]
        prev, cur = cur, nxt
    return UvPoly("t", cur)


def _chebyshev_in(d: int, var: str) -> MvPoly:
    coeffs = chebyshev(d).coeffs
    return MvPoly.from_coefficients_in(
        var, [MvPoly.constant(c) for c in coeffs])


def lissajous_curve(params: LissajousParams) -> MvPoly:
    """Implicit equation of the Lissajous curve: the canonical squarefree
    resultant of T_d1(t) - x and T_d2(t) - y with respect to t."""
    x, y = MvPoly.var("x"), MvPoly.var("y")
    a = _chebyshev_in(params.d1, "t") - x
    b = _chebyshev_in(params.d2, "t") - y
    return canonicalize(squarefree_part(resultant(a, b, "t")))


def lissajous_nodes(params: LissajousParams, tol: float = 1e-9) -> tuple:
    """All nodes of the Lissajous curve, with their angle pairs.

    Every (k, l) with 1 <= k < d1, 1 <= l < d2 yields a node at
    (cos(d1*theta'), cos(d2*theta')); the pairs (k, l) and
    (d1-k, d2-l) hit the same point, so one representative is kept and
    the count is (d1-1)(d2-1)/2.  Returns (nodes, count) after checking
    numerically that theta' and theta'' agree on the coordinates.
    """
    d1, d2 = params.d1, params.d2
    emitted = set()
    nodes = []
    for k in range(1, d1):
        for l in range(1, d2):
            if (d1 - k, d2 - l) in emitted:
                continue
            emitted.add((k, l))
            tp = Fraction(k, d1) + Fraction(l, d2)
            ts = abs(Fraction(l, d2) - Fraction(k, d1))
            x = cos(pi * float(d1 * tp))
            y = cos(pi * float(d2 * tp))
            x2 = cos(pi * float(d1 * ts))
            y2 = cos(pi * float(d2 * ts))
            if abs(x - x2) > tol or abs(y - y2) > tol:
                raise ArithmeticError(
                    f"node ({k},{l}) failed the angle-pair check: "
                    f"({x},{y}) vs ({x2},{y2})")
            nodes.append(NodePair(k=k, l=l, theta_prime=tp,
                                  theta_second=ts, x=x, y=y))
    count = (d1 - 1) * (d2 - 1) // 2
    if len(nodes) != count:
        raise ArithmeticError(
            f"expected {count} distinct nodes, built {len(nodes)}")
    return tuple(nodes), count


def lissajous_problem(params: LissajousParams) -> FlatteningProblem:
    """The thickening map f = T_d1(u) + eps*v, g = T_d2(u) + eps*w on
    the unit ball."""
    eps = params.eps
    f = _chebyshev_in(params.d1, "u") + eps * MvPoly.var("v")
    g = _chebyshev_in(params.d2, "u") + eps * MvPoly.var("w")
    return FlatteningProblem(f, g, mode="ball")


@dataclass(frozen=True)
class NewtonReport:
    """Degree and support of a computed q next to the conjectured shape.

    The support of q is expected (empirically, not provably) to be the
    full triangle with vertices (0,0), (4*d2-2, 0), (0, 2*d1+2*d2-2);
    the verdict records whether this instance agrees and asserts
    nothing beyond it.
    """

    degree: int
    degree_bound: int
    support: Polygon2D
    conjectured_triangle: Polygon2D
    contained: bool
    vertices_attained: bool
    verdict: str


def lissajous_q(params: LissajousParams) -> tuple:
    """Outer boundary q of the thickened Lissajous image, by resultant.

    The graph equations solve linearly for v and w, so substituting
    v = (x - T_d1(u))/eps and w = (y - T_d2(u))/eps into the body
    polynomial and into the 3x3 Jacobian determinant

        2*v*eps*T_d1'(u) + 2*w*eps*T_d2'(u) - 2*eps^2*u

    leaves two polynomials in u, x, y whose resultant in u (after
    clearing eps denominators) cuts out the image of the boundary
    critical locus.  Returns (q, NewtonReport).
    """
    d1, d2, eps = params.d1, params.d2, params.eps
    u, x, y = MvPoly.var("u"), MvPoly.var("x"), MvPoly.var("y")
    t1 = _chebyshev_in(d1, "u")
    t2 = _chebyshev_in(d2, "u")
    rx, ry = x - t1, y - t2
    # eps^2 * h and eps * jacobian: same zero sets, no denominators
    hh = eps ** 2 * (1 - u ** 2) - rx ** 2 - ry ** 2
    jj = 2 * rx * t1.diff("u") + 2 * ry * t2.diff("u") - 2 * eps ** 2 * u
    res = resultant(hh, jj, "u")
    if res.is_zero():
        raise DegenerateInputError(
            "the Sylvester shortcut collapsed: the body and Jacobian "
            "surfaces share a component")
    q = canonicalize(squarefree_part(res))
    bound = 4 * d2 - 2
    triangle = Polygon2D([(0, 0), (bound, 0), (0, 2 * d1 + 2 * d2 - 2)])
    support = newton_polygon(q)
    contained = triangle.contains_polygon(support)
    attained = all(v in support.vertices for v in triangle.vertices)
    verdict = ("conjecture holds for this instance"
               if contained and attained
               else "conjecture fails for this instance")
    report = NewtonReport(
        degree=q.total_degree(), degree_bound=bound, support=support,
        conjectured_triangle=triangle, contained=contained,
        vertices_attained=attained, verdict=verdict)
    return q, report
