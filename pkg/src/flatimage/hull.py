"""Sampled convex hulls and support-function lower bounds.

The support value gamma(a, b) = max{a*x + b*y over the image} is
estimated from below: take the best of n sampled image points, then
climb from it with an exact pattern search.  Every candidate the search
accepts is a certified body point (h >= 0 checked in rational
arithmetic, or a point produced by the exact sphere/circle charts), so
the returned value is always a true lower bound, never an overshoot.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import cos, pi, sin
from typing import NamedTuple

from .boundary import FlatteningProblem
from .geometry import Polygon2D
from .regions import _shipped_parametrization, sample_body

_ASCENT_ITERS = 200
_MIN_STEP = Fraction(1, 1 << 80)
_DIRECTION_DENOM = 10 ** 6


@dataclass(frozen=True)
class SupportQuery:
    """One support-function direction with its sampling effort."""

    alpha: Fraction
    beta: Fraction
    n: int = 10_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("support direction must be nonzero")
        if self.n < 1:
            raise ValueError("need at least one sample")


class SupportEstimate(NamedTuple):
    value: Fraction
    witness: tuple


@dataclass(frozen=True)
class HullReport:
    """Inner sampled hull plus m supporting halfplanes (a, b, gamma)
    with a*x + b*y <= gamma; `gap` estimates the Hausdorff distance
    between the two approximations along the sampled directions."""

    problem: FlatteningProblem
    n: int
    m: int
    seed: int
    inner: Polygon2D
    halfplanes: tuple
    gap: float


def convex_hull_2d(points) -> Polygon2D:
    """Convex hull of a planar point cloud, exact for rational input."""
    return Polygon2D(points)


def _objective(problem, alpha, beta):
    names = problem.body_vars
    f, g = problem.f, problem.g

    def value(pt):
        env = dict(zip(names, pt))
        return alpha * f.evaluate(env) + beta * g.evaluate(env)

    return value


def _ascent(value_fn, feasible, start, best):
    """Exact pattern search: step along each axis, double the step on
    success, halve on failure.  Only feasible moves are accepted, so the
    running best never leaves the body."""
    x = tuple(start)
    dims = len(x)
    step = Fraction(1, 4)
    for _ in range(_ASCENT_ITERS):
        improved = False
        for i in range(dims):
            for sgn in (1, -1):
                cand = x[:i] + (x[i] + sgn * step,) + x[i + 1:]
                if not feasible(cand):
                    continue
                v = value_fn(cand)
                if v > best:
                    best, x, improved = v, cand, True
        if improved:
            step *= 2
        else:
            step /= 2
            if step < _MIN_STEP:
                break
    return best, x


def _chart_starts(problem, pt):
    """Boundary-chart parameters whose image lies near the stereographic
    shadow of pt.  Each chart covers the sphere (circle) minus one pole,
    so both mirrored charts are searched."""
    if problem.mode == "ball":
        u, v, w = pt
        south = ((u / (1 - w), v / (1 - w)) if w != 1 else
                 (Fraction(0), Fraction(0)))
        north = ((u / (1 + w), v / (1 + w)) if w != -1 else
                 (Fraction(0), Fraction(0)))
        return [("south", south), ("north", north)]
    u, v = pt
    right = (v / (1 + u),) if u != -1 else (Fraction(0),)
    left = (v / (1 - u),) if u != 1 else (Fraction(0),)
    return [("right", right), ("left", left)]


def _chart_map(problem, name):
    if problem.mode == "ball":
        if name == "south":
            def chart(p):
                s, t = p
                d = s * s + t * t + 1
                return (2 * s / d, 2 * t / d, (s * s + t * t - 1) / d)
        else:
            def chart(p):
                s, t = p
                d = s * s + t * t + 1
                return (2 * s / d, 2 * t / d, (1 - s * s - t * t) / d)
        return chart
    if name == "right":
        def chart(p):
            (t,) = p
            d = t * t + 1
            return ((1 - t * t) / d, 2 * t / d)
    else:
        def chart(p):
            (t,) = p
            d = t * t + 1
            return ((t * t - 1) / d, 2 * t / d)
    return chart


def _refine(problem, objective, start, best):
    """Climb from the best sample: first inside the body, then along its
    boundary through the exact charts (shipped bodies only)."""
    names = problem.body_vars
    h = problem.h

    def feasible(pt):
        return h.evaluate(dict(zip(names, pt))) >= 0

    best, witness = _ascent(objective, feasible, start, best)
    if _shipped_parametrization(problem):
        for name, chart_start in _chart_starts(problem, witness):
            chart = _chart_map(problem, name)
            value, params = _ascent(lambda p: objective(chart(p)),
                                    lambda p: True, chart_start, best)
            if value > best:
                best, witness = value, chart(params)
    return best, witness


def support_estimate(problem: FlatteningProblem,
                     query: SupportQuery) -> SupportEstimate:
    """Lower bound for the support value in the query direction.

    Maximizes alpha*x + beta*y over n sampled image points, then refines
    the best sample by exact pattern search.  The witness is a body
    point achieving the bound, so the estimate can never exceed the true
    support value.
    """
    objective = _objective(problem, query.alpha, query.beta)
    best, start = None, None
    for pt in sample_body(problem, query.n, query.seed):
        v = objective(pt)
        if best is None or v > best:
            best, start = v, pt
    value, witness = _refine(problem, objective, start, best)
    return SupportEstimate(value=value, witness=witness)


def _spread_directions(m: int) -> list:
    """m rational directions spread around the circle; the axis-aligned
    and diagonal ones come out exact."""
    out = []
    for k in range(m):
        theta = 2 * pi * k / m
        a = Fraction(cos(theta)).limit_denominator(_DIRECTION_DENOM)
        b = Fraction(sin(theta)).limit_denominator(_DIRECTION_DENOM)
        out.append((a, b))
    return out


def hull_report(problem: FlatteningProblem, n: int, m: int,
                seed: int) -> HullReport:
    """Inner hull of n sampled image points and m supporting halfplanes.

    One shared sample batch feeds both sides: the polygon is the exact
    hull of the sampled images, and each direction's support bound is
    the refined maximum over the same samples.  By construction every
    sample, hence every inner vertex, satisfies all the halfplanes.
    """
    if m < 3:
        raise ValueError("need at least three directions")
    if n < 1:
        raise ValueError("need at least one sample")
    names = problem.body_vars
    f, g = problem.f, problem.g
    pts = sample_body(problem, n, seed)
    images = []
    for pt in pts:
        env = dict(zip(names, pt))
        images.append((f.evaluate(env), g.evaluate(env)))
    inner = Polygon2D(images)
    halfplanes = []
    for a, b in _spread_directions(m):
        best, start = None, None
        for pt, (x, y) in zip(pts, images):
            v = a * x + b * y
            if best is None or v > best:
                best, start = v, pt
        value, _ = _refine(problem, _objective(problem, a, b), start, best)
        halfplanes.append((a, b, value))
    gap = 0.0
    for a, b, value in halfplanes:
        reach = max(a * x + b * y for x, y in inner.vertices)
        norm = float(a * a + b * b) ** 0.5
        gap = max(gap, float(value - reach) / norm)
    return HullReport(problem=problem, n=n, m=m, seed=seed, inner=inner,
                      halfplanes=tuple(halfplanes), gap=gap)
