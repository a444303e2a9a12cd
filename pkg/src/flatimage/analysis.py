"""Closed-form predictions for generic boundary curves.

For a map built from generic polynomials of total degrees (d1, d2) and
a generic body of degree e, the two boundary curves have known degrees,
Newton triangles, genera, and nodal counts.  This module evaluates those
formulas, counts lattice points of the predicted supports, and compares
a computed boundary pair against the generic expectations.  For special
(non-generic) inputs the formulas are upper bounds, so the comparison
reports deviations instead of asserting equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .algebra import newton_polygon
from .boundary import BoundaryPair
from .geometry import Polygon2D
from .mvpoly import MvPoly

__all__ = [
    "DegreeProfile",
    "Predictions",
    "CurveComparison",
    "InstanceComparison",
    "predictions",
    "degree_bound",
    "lattice_count",
    "verify_instance",
]


@dataclass(frozen=True)
class DegreeProfile:
    """Total degrees (d1, d2, e) of the two map components and the body."""

    d1: int
    d2: int
    e: int

    def __post_init__(self):
        for label in ("d1", "d2", "e"):
            value = getattr(self, label)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{label} must be a positive integer, "
                                 f"got {value!r}")


@dataclass(frozen=True)
class Predictions:
    """The eight generic quantities plus the two predicted supports."""

    D_p: int
    D_q: int
    deg_p: int
    deg_q: int
    genus_p: int
    genus_q: int
    sing_p: int
    sing_q: int
    newt_p: Polygon2D
    newt_q: Polygon2D


def _exact_half(n: int, label: str) -> int:
    # every closed form below is of the shape (even integer)/2; an odd
    # numerator means the formula was transcribed wrong, not bad input
    if n % 2:
        raise ArithmeticError(
            f"internal consistency failure: {label} evaluated to the "
            f"half-integer {n}/2")
    return n // 2


def _interior_points(r: int, d1: int, d2: int) -> int:
    """Interior lattice points of r*conv{(0,0),(0,d1),(d2,0)} in closed
    form.  Degenerate r = 0 yields 1 by the same expression, which keeps
    the nodal-count difference nonnegative."""
    return _exact_half((r * d1 - 1) * (r * d2 - 1) - gcd(r * d1, r * d2) + 1,
                       "interior lattice count")


def _scaled_triangle(r: int, d1: int, d2: int) -> Polygon2D:
    return Polygon2D([(0, 0), (r * d2, 0), (0, r * d1)])


def predictions(profile: DegreeProfile) -> Predictions:
    """Evaluate the generic degree, genus, and node-count formulas.

    The two branch curves of a generic degree-(d1, d2) map over a
    degree-e body have supports D*conv{(0,0),(0,d1),(d2,0)} with scale
    factors D_p = d1^2 + d1*d2 + d2^2 - 3*d1 - 3*d2 + 3 and
    D_q = e*(d1 + d2 + e - 3).  All their singularities are nodes, and
    the node count is the interior lattice count of the support minus
    the geometric genus.
    """
    d1, d2, e = profile.d1, profile.d2, profile.e
    D_p = d1 * d1 + d1 * d2 + d2 * d2 - 3 * d1 - 3 * d2 + 3
    D_q = e * (d1 + d2 + e - 3)
    m = max(d1, d2)
    genus_p = _exact_half(
        2 * d1 ** 3 + 3 * d1 ** 2 * d2 + 3 * d1 * d2 ** 2 + 2 * d2 ** 3
        - 13 * d1 ** 2 - 16 * d1 * d2 - 13 * d2 ** 2
        + 27 * d1 + 27 * d2 - 20, "genus(p)")
    genus_q = _exact_half(
        d1 ** 2 * e + 2 * d1 * d2 * e + 3 * d1 * e ** 2 + d2 ** 2 * e
        + 3 * d2 * e ** 2 + 2 * e ** 3 - 10 * d1 * e - 10 * d2 * e
        - 13 * e ** 2 + 21 * e + 2, "genus(q)")
    return Predictions(
        D_p=D_p,
        D_q=D_q,
        deg_p=D_p * m,
        deg_q=D_q * m,
        genus_p=genus_p,
        genus_q=genus_q,
        sing_p=_interior_points(D_p, d1, d2) - genus_p,
        sing_q=_interior_points(D_q, d1, d2) - genus_q,
        newt_p=_scaled_triangle(D_p, d1, d2),
        newt_q=_scaled_triangle(D_q, d1, d2),
    )


def degree_bound(profile: DegreeProfile) -> int:
    """Largest possible degree of the full algebraic boundary: the sum
    of both generic curve degrees, tight for generic inputs and an upper
    bound otherwise."""
    pred = predictions(profile)
    return pred.deg_p + pred.deg_q


def lattice_count(r: int, d1: int, d2: int, mode: str = "all") -> int:
    """Lattice points of the triangle r*conv{(0,0),(0,d1),(d2,0)}.

    mode "all" counts the closed triangle by row enumeration; mode
    "interior" uses the closed form
    ((r*d1-1)*(r*d2-1) - gcd(r*d1, r*d2) + 1) / 2.
    """
    if r < 1 or d1 < 1 or d2 < 1:
        raise ValueError("triangle parameters must be positive")
    if mode == "interior":
        return _interior_points(r, d1, d2)
    if mode != "all":
        raise ValueError(f"unknown mode {mode!r}")
    # points (i, j) with i, j >= 0 and i*d1 + j*d2 <= r*d1*d2
    bound = r * d1 * d2
    return sum((bound - i * d1) // d2 + 1 for i in range(r * d2 + 1))


# ---------------------------------------------------------------------------
# instance comparison


@dataclass(frozen=True)
class CurveComparison:
    """One curve of a computed pair measured against its prediction."""

    name: str
    predicted_degree: int
    actual_degree: Optional[int]
    predicted_support: Polygon2D
    actual_support: Optional[Polygon2D]
    support_relation: str  # "equal" | "strictly-contained" | "other" | "absent"
    predicted_terms: int
    actual_terms: Optional[int]
    deviations: tuple


@dataclass(frozen=True)
class InstanceComparison:
    p: CurveComparison
    q: CurveComparison
    generic: bool
    verdict: str


def _compare_curve(name: str, curve: Optional[MvPoly], predicted_degree: int,
                   support: Polygon2D, full_terms: int) -> CurveComparison:
    if curve is None:
        return CurveComparison(
            name=name, predicted_degree=predicted_degree, actual_degree=None,
            predicted_support=support, actual_support=None,
            support_relation="absent", predicted_terms=full_terms,
            actual_terms=None,
            deviations=(f"{name} does not exist",))
    deviations = []
    deg = curve.total_degree()
    if deg != predicted_degree:
        deviations.append(f"deg {name} = {deg} != {predicted_degree}")
    actual_support = newton_polygon(curve)
    if actual_support == support:
        relation = "equal"
    elif support.contains_polygon(actual_support):
        relation = "strictly-contained"
        deviations.append(
            f"support of {name} is strictly inside the generic triangle")
    else:
        relation = "other"
        deviations.append(
            f"support of {name} leaves the generic triangle")
    terms = curve.term_count()
    if terms != full_terms:
        deviations.append(f"terms {name} = {terms} != {full_terms}")
    return CurveComparison(
        name=name, predicted_degree=predicted_degree, actual_degree=deg,
        predicted_support=support, actual_support=actual_support,
        support_relation=relation, predicted_terms=full_terms,
        actual_terms=terms, deviations=tuple(deviations))


def verify_instance(bp: BoundaryPair,
                    profile: DegreeProfile) -> InstanceComparison:
    """Measure a computed boundary pair against the generic predictions.

    Nothing is asserted: special inputs legitimately fall short of the
    generic degrees, so each shortfall is reported as a deviation and
    the verdict summarizes them.
    """
    pred = predictions(profile)
    d1, d2 = profile.d1, profile.d2
    full_p = (lattice_count(pred.D_p, d1, d2, "all")
              if pred.D_p >= 1 else 1)
    full_q = (lattice_count(pred.D_q, d1, d2, "all")
              if pred.D_q >= 1 else 1)
    cp = _compare_curve("p", bp.p, pred.deg_p, pred.newt_p, full_p)
    cq = _compare_curve("q", bp.q, pred.deg_q, pred.newt_q, full_q)
    deviations = cp.deviations + cq.deviations
    generic = not deviations
    verdict = ("matches generic predictions" if generic
               else "; ".join(deviations))
    return InstanceComparison(p=cp, q=cq, generic=generic, verdict=verdict)
