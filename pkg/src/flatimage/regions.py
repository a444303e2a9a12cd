"""Certified cell labeling of the flattened image.

The critical x-values split the plane into vertical strips; inside a
strip the boundary curves keep a constant number of real y-roots, so a
cell of the complementary arrangement is named by the strip index k and
the count l of boundary roots below the point.  Every label here is
computed in exact rational arithmetic; floats only appear in the hole
counter's fast path, backed by exact interval rechecks.
"""

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Optional

from .algebra import (canonicalize, chain_variations_at,
                      chain_variations_at_inf, integer_primitive, iprim,
                      isign_at, resultant, sturm_chain)
from .boundary import (BoundaryPair, FlatteningProblem, compute_boundary,
                       default_body)
from .errors import DegenerateInputError, UnboundedCellError
from .mvpoly import MvPoly, UvPoly
from .realroots import (Coincident, CriticalList, compare,
                        compare_to_rational, isolate_roots, locate_strip)
from .rng import SampleStream, stream_for

_BODY_BITS = 16
_BOUNDARY_BITS = 7
_ATTEMPT_CAP = 10_000
_RETRY_BUDGET = 10
_FALLBACK_ROUNDS = 48
_LANE_BODY = 0
_LANE_BOUNDARY = 1
_LANE_PROBE = 2


@dataclass(frozen=True, order=True)
class RegionLabel:
    """Cell name (k, l): strip index and boundary-roots-below count,
    both 1-based.  Only bounded cells are ever labeled."""

    k: int
    l: int

    def __post_init__(self):
        for name, value in (("k", self.k), ("l", self.l)):
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer")


@dataclass(frozen=True)
class Report:
    """Full output of the flattening pipeline: the boundary pair, the
    critical list, and the label sets discovered by sampling."""

    problem: FlatteningProblem
    boundary: BoundaryPair
    criticals: CriticalList
    labels_interior: frozenset
    labels_boundary: frozenset
    samples_used: Mapping
    seed: int
    diagnostics: Mapping


# ---------------------------------------------------------------------------
# critical x-values


def _ycolumns(f: MvPoly) -> list:
    return [UvPoly.from_mvpoly(c, "x") if not c.is_zero() else UvPoly("x", [])
            for c in f.coefficients_in("y")]


def _islice(columns: list, xbar: Fraction) -> list:
    """Integer-primitive coefficient list of a slice at x = xbar."""
    vals = [c(xbar) for c in columns]
    den = lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    while ints and ints[-1] == 0:
        ints.pop()
    return iprim(ints) if ints else []


def _between(a, b) -> Fraction:
    """A rational strictly between two distinct real algebraic values."""
    while not a.hi < b.lo:
        if not a.is_rational() and a.hi - a.lo >= b.hi - b.lo:
            a = a.refine((a.hi - a.lo) / 2)
        else:
            b = b.refine((b.hi - b.lo) / 2)
    return (a.hi + b.lo) / 2


def _tag_pattern(pcols: list, qcols: list, xbar: Fraction) -> str:
    """Bottom-to-top sequence of curve tags of the slice roots at xbar.

    xbar must avoid every candidate critical value, so the two root
    lists are disjoint and the merge order is exact.
    """
    pr = isolate_roots(_islice(pcols, xbar)) if pcols else []
    qr = isolate_roots(_islice(qcols, xbar))
    out = []
    i = j = 0
    while i < len(pr) and j < len(qr):
        if compare(pr[i], qr[j]) < 0:
            out.append("p")
            i += 1
        else:
            out.append("q")
            j += 1
    out.extend("p" * (len(pr) - i))
    out.extend("q" * (len(qr) - j))
    return "".join(out)


def _prune_intersections(bp: BoundaryPair, criticals: CriticalList):
    """Drop intersection x-values where p and q touch without crossing.

    A value tagged only as a pq-intersection is kept exactly when the
    bottom-to-top pattern of curve tags differs between the adjacent
    strips: then branches exchange order (or appear) there and the value
    delimits a real change of cell structure.  A touch-and-separate
    contact leaves the pattern identical on both sides and delimits
    nothing, so it is removed.
    """
    pure = frozenset({"pq-intersection"})
    if pure not in criticals.sources:
        return criticals, 0
    pcols = _ycolumns(bp.p)
    qcols = _ycolumns(bp.q)
    values = list(criticals.values)
    probes = []
    for i in range(len(values) + 1):
        if i == 0:
            probes.append(values[0].lo - 1)
        elif i == len(values):
            probes.append(values[-1].hi + 1)
        else:
            probes.append(_between(values[i - 1], values[i]))
    patterns: dict = {}

    def pattern(i):
        if i not in patterns:
            patterns[i] = _tag_pattern(pcols, qcols, probes[i])
        return patterns[i]

    keep_values, keep_sources, dropped = [], [], 0
    for i, (v, src) in enumerate(zip(values, criticals.sources)):
        if src == pure and pattern(i) == pattern(i + 1):
            dropped += 1
            continue
        keep_values.append(v)
        keep_sources.append(src)
    return (CriticalList(values=tuple(keep_values),
                         sources=tuple(keep_sources)), dropped)


def _critical_candidates(bp: BoundaryPair) -> CriticalList:
    tagged = []
    curves = []
    if bp.p is not None:
        curves.append(("p", bp.p))
    curves.append(("q", bp.q))
    for name, f in curves:
        if f.degree_in("y") < 1:
            raise DegenerateInputError(
                f"boundary curve {name} does not involve y; its slices "
                "cannot bound a two-dimensional image")
        disc = resultant(f, f.diff("y"), "y")
        if disc.is_zero():
            raise DegenerateInputError(
                f"the y-discriminant of {name} vanishes identically, so "
                f"{name} has a repeated factor; the pipeline cannot continue")
        for root in isolate_roots(UvPoly.from_mvpoly(disc, "x")):
            tagged.append((root, name + "-discriminant"))
        lead = f.coefficients_in("y")[-1]
        if lead.degree_in("x") > 0:
            for root in isolate_roots(UvPoly.from_mvpoly(lead, "x")):
                tagged.append((root, name + "-leading"))
    if bp.p is not None:
        inter = resultant(bp.p, bp.q, "y")
        if inter.is_zero():
            raise DegenerateInputError(
                "p and q share a common factor (their resultant in y is "
                "identically zero); the pipeline cannot continue")
        for root in isolate_roots(UvPoly.from_mvpoly(inter, "x")):
            tagged.append((root, "pq-intersection"))
    return CriticalList.from_tagged_roots(tagged)


def _critical_xvalues_counted(bp: BoundaryPair):
    return _prune_intersections(bp, _critical_candidates(bp))


def critical_xvalues(bp: BoundaryPair) -> CriticalList:
    """Critical x-values: where the vertical cell structure can change.

    Candidates are the real roots of the y-discriminants of p and q and
    of their mutual resultant, plus the x-values where a leading
    coefficient in y drops.  Intersection-only candidates across which
    the slice root pattern provably does not change (the curves touch
    without exchanging branches) are pruned; every surviving value
    delimits strips with genuinely different cell structure.
    """
    pruned, _ = _critical_xvalues_counted(bp)
    return pruned


# ---------------------------------------------------------------------------
# slice root counting


class _SliceCounter:
    """Counts boundary roots below a query point on a vertical slice.

    Precomputes the y-coefficient columns of the product of the boundary
    curves once; per point it evaluates the columns, clears denominators
    and runs a Sturm count, so no per-sample root isolation is needed.
    """

    def __init__(self, bp: BoundaryPair):
        prod = bp.q if bp.p is None else bp.p * bp.q
        prod = integer_primitive(prod)
        cols = prod.coefficients_in("y")
        if len(cols) <= 1:
            raise DegenerateInputError(
                "the boundary product does not involve y; no vertical "
                "cell structure exists")
        self.columns = [UvPoly.from_mvpoly(c, "x") if not c.is_zero()
                        else UvPoly("x", []) for c in cols]

    def slice_coeffs(self, xbar: Fraction) -> list:
        ints = _islice(self.columns, xbar)
        if not ints:
            raise DegenerateInputError(
                "a boundary curve vanishes on an entire vertical line "
                "that escaped the critical list")
        return ints

    def count(self, xbar: Fraction, ybar: Fraction):
        """(roots below ybar, total real roots, point-on-curve flag)."""
        c = self.slice_coeffs(xbar)
        if len(c) == 1:
            return 0, 0, False
        if isign_at(c, ybar.numerator, ybar.denominator) == 0:
            return 0, 0, True
        chain = sturm_chain(c)
        at_bottom = chain_variations_at_inf(chain, False)
        below = at_bottom - chain_variations_at(
            chain, ybar.numerator, ybar.denominator)
        total = at_bottom - chain_variations_at_inf(chain, True)
        return below, total, False


def _label(counter: _SliceCounter, criticals: CriticalList,
           xbar: Fraction, ybar: Fraction):
    k = locate_strip(criticals, xbar)
    if isinstance(k, Coincident):
        return k
    if k == 0 or k == len(criticals):
        raise UnboundedCellError(
            f"image point with x = {float(xbar):.6g} lies outside every "
            "bounded strip; a compact image cannot reach there")
    below, total, on_curve = counter.count(xbar, ybar)
    if on_curve:
        return Coincident(k)
    if below == 0 or below == total:
        raise UnboundedCellError(
            f"image point ({float(xbar):.6g}, {float(ybar):.6g}) landed in "
            "an unbounded vertical cell; a compact image cannot reach there")
    return RegionLabel(k, below)


def label_point(bp: BoundaryPair, criticals: CriticalList, pt):
    """Label one rational image point, or report coincidence.

    Returns a RegionLabel, or a Coincident marker when the point sits on
    a critical line or on a boundary curve.  Raises UnboundedCellError
    when the point falls in an unbounded cell, which cannot happen for
    genuine image samples.
    """
    x, y = pt
    return _label(_SliceCounter(bp), criticals, Fraction(x), Fraction(y))


# ---------------------------------------------------------------------------
# sampling


def sphere_point(s, t) -> tuple:
    """Rational point on the unit sphere: (2s, 2t, s²+t²−1)/(s²+t²+1)."""
    s, t = Fraction(s), Fraction(t)
    d = s * s + t * t + 1
    return (2 * s / d, 2 * t / d, (s * s + t * t - 1) / d)


def circle_point(t) -> tuple:
    """Rational point on the unit circle: (1−t², 2t)/(1+t²)."""
    t = Fraction(t)
    d = t * t + 1
    return ((1 - t * t) / d, 2 * t / d)


def _warp(r: Fraction) -> Fraction:
    # dyadic (-1, 1) onto the whole line, so the parametrizations cover
    # everything except a single limit point per chart
    return r / (1 - r * r)


def _draw_body(stream: SampleStream, problem: FlatteningProblem) -> tuple:
    names = problem.body_vars
    h = problem.h
    for _ in range(_ATTEMPT_CAP):
        pt = tuple(stream.dyadic(_BODY_BITS) for _ in names)
        if h.evaluate(dict(zip(names, pt))) >= 0:
            return pt
    raise DegenerateInputError(
        f"rejection sampling discarded {_ATTEMPT_CAP} consecutive proposals "
        "(rejection rate above 99.9%); the body is empty or far too small")


def sample_body(problem: FlatteningProblem, n: int, seed: int) -> list:
    """n rational points of the body, by rejection from the bounding
    cube; point i depends only on (seed, i), never on n."""
    if n < 1:
        raise ValueError("need at least one sample")
    return [_draw_body(stream_for(seed, _LANE_BODY, i), problem)
            for i in range(n)]


class BoundaryPoints(list):
    """Boundary sample list.  `exact` is False when the points come from
    the numeric bisection fallback; `tolerance` then bounds the
    parameter-interval width of the final bracket."""

    exact: bool = True
    tolerance: Optional[Fraction] = None


def _shipped_parametrization(problem: FlatteningProblem) -> bool:
    return canonicalize(problem.h) == canonicalize(default_body(problem.mode))


def _bisect_boundary(problem: FlatteningProblem, anchor: tuple,
                     stream: SampleStream) -> tuple:
    names = problem.body_vars
    h = problem.h

    def at(tau):
        return {nm: a + tau * d
                for nm, a, d in zip(names, anchor, direction)}

    while True:
        direction = tuple(stream.dyadic(_BOUNDARY_BITS) for _ in names)
        if any(direction):
            break
    lo, hi = Fraction(0), Fraction(1)
    doublings = 0
    while h.evaluate(at(hi)) >= 0:
        hi *= 2
        doublings += 1
        if doublings > 64:
            raise DegenerateInputError(
                "the body appears unbounded along a sampled ray; cannot "
                "bracket its boundary numerically")
    for _ in range(_FALLBACK_ROUNDS):
        mid = (lo + hi) / 2
        v = h.evaluate(at(mid))
        if v == 0:
            env = at(mid)
            return tuple(env[nm] for nm in names)
        if v > 0:
            lo = mid
        else:
            hi = mid
    env = at((lo + hi) / 2)
    return tuple(env[nm] for nm in names)


def _boundary_drawer(problem: FlatteningProblem, seed: int):
    """(draw function, exact flag) for boundary points."""
    if _shipped_parametrization(problem):
        if problem.mode == "ball":
            def draw(stream):
                s = _warp(stream.dyadic_open(_BOUNDARY_BITS))
                t = _warp(stream.dyadic_open(_BOUNDARY_BITS))
                return sphere_point(s, t)
        else:
            def draw(stream):
                return circle_point(_warp(stream.dyadic_open(_BOUNDARY_BITS)))
        return draw, True
    anchor = _draw_body(stream_for(seed, _LANE_PROBE, 0), problem)

    def draw(stream):
        return _bisect_boundary(problem, anchor, stream)
    return draw, False


def sample_boundary(problem: FlatteningProblem, n: int, seed: int):
    """n rational points on the body boundary.

    Spheres and circles use the shipped rational parametrization, so
    h = 0 holds exactly; any other body falls back to bisecting h along
    rays from an interior anchor, and the result is flagged inexact.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    draw, exact = _boundary_drawer(problem, seed)
    pts = BoundaryPoints(draw(stream_for(seed, _LANE_BOUNDARY, i))
                         for i in range(n))
    pts.exact = exact
    if not exact:
        pts.tolerance = Fraction(1, 1 << _FALLBACK_ROUNDS)
    return pts


# ---------------------------------------------------------------------------
# report assembly


def _label_index(problem, counter, criticals, seed, lane, index, draw, cache):
    stream = stream_for(seed, lane, index)
    names = problem.body_vars
    for _ in range(_RETRY_BUDGET):
        pt = draw(stream)
        env = dict(zip(names, pt))
        key = (problem.f.evaluate(env), problem.g.evaluate(env))
        hit = cache.get(key)
        if hit is not None:
            return hit
        lab = _label(counter, criticals, key[0], key[1])
        if not isinstance(lab, Coincident):
            cache[key] = lab
            return lab
    return None


def _label_batch(problem, counter, criticals, seed, n, lane, draw, workers):
    cache: dict = {}

    def one(index):
        return _label_index(problem, counter, criticals, seed, lane, index,
                            draw, cache)

    if workers == 1:
        results = [one(i) for i in range(n)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(n), chunksize=256))
    labels = {r for r in results if r is not None}
    used = sum(1 for r in results if r is not None)
    return labels, used, n - used


def flatten_report(problem: FlatteningProblem, n: int, seed: int, *,
                   workers: int = 1, boundary: Optional[BoundaryPair] = None,
                   boundary_n: Optional[int] = None,
                   budget=None) -> Report:
    """Run the whole pipeline: boundary curves, critical x-values, then
    n labeled samples from the body and from its boundary.

    Coincident samples are redrawn up to 10 times per slot and dropped
    afterwards; drops are counted in the diagnostics.  Results are
    identical for any worker count because every sample is keyed by
    (seed, index) alone.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if workers < 1:
        raise ValueError("need at least one worker")
    bp = boundary if boundary is not None else compute_boundary(
        problem, budget=budget)
    criticals, pruned = _critical_xvalues_counted(bp)
    counter = _SliceCounter(bp)
    draw_body = lambda stream: _draw_body(stream, problem)
    interior, used_i, dropped_i = _label_batch(
        problem, counter, criticals, seed, n, _LANE_BODY, draw_body, workers)
    if problem.mode == "pancake":
        # the disk boundary is a curve, so its image lies inside V(q):
        # every boundary sample would be coincident by construction
        bnd, used_b, dropped_b = set(), 0, 0
        sampling = "skipped-one-dimensional-boundary"
    else:
        draw_bnd, exact = _boundary_drawer(problem, seed)
        m = n if boundary_n is None else boundary_n
        bnd, used_b, dropped_b = _label_batch(
            problem, counter, criticals, seed, m, _LANE_BOUNDARY, draw_bnd,
            workers)
        sampling = "exact-parametrization" if exact else "numeric-bisection"
    diagnostics = {
        "p_nonexistent": bp.diagnostics.p_nonexistent,
        "p_non_principal": bp.diagnostics.p_non_principal,
        "q_non_principal": bp.diagnostics.q_non_principal,
        "boundary_sampling": sampling,
        "coincident_dropped_interior": dropped_i,
        "coincident_dropped_boundary": dropped_b,
        "intersection_values_pruned": pruned,
        "boundary_label_note": (
            "a label counts as boundary-touched if any boundary sample "
            "lands in it; partial coverage is not distinguished"),
    }
    return Report(problem=problem, boundary=bp, criticals=criticals,
                  labels_interior=frozenset(interior),
                  labels_boundary=frozenset(bnd),
                  samples_used={"interior": used_i, "boundary": used_b},
                  seed=seed, diagnostics=diagnostics)


# ---------------------------------------------------------------------------
# membership and hole counting


def membership(report: Report, pt) -> str:
    """Classify a rational plane point against a finished report:
    'inside', 'outside' or 'boundary-coincident'."""
    x, y = (Fraction(c) for c in pt)
    criticals = report.criticals
    k = locate_strip(criticals, x)
    if isinstance(k, Coincident):
        return "boundary-coincident"
    if k == 0 or k == len(criticals):
        return "outside"
    counter = _SliceCounter(report.boundary)
    below, total, on_curve = counter.count(x, y)
    if on_curve:
        return "boundary-coincident"
    if below == 0 or below == total:
        return "outside"
    label = RegionLabel(k, below)
    return "inside" if label in report.labels_interior else "outside"


def _column_inside(counter, criticals, labels, xbar, ys, dy):
    """Inside flags for one grid column, exact where it matters.

    Roots are isolated exactly, refined below the row spacing, and rows
    are classified through float midpoints; any row too close to call
    falls back to exact sign comparisons.
    """
    k = locate_strip(criticals, xbar)
    if isinstance(k, Coincident) or k == 0 or k == len(criticals):
        return [False] * len(ys)
    roots = isolate_roots(counter.slice_coeffs(xbar))
    total = len(roots)
    if total < 2:
        return [False] * len(ys)
    width = dy / 8
    refined = [r.refine(width) for r in roots]
    mids = [(float(r.lo) + float(r.hi)) / 2 for r in refined]
    guard = float(width)
    out = []
    for y in ys:
        yf = float(y)
        lo, hi = 0, total
        while lo < hi:
            m = (lo + hi) // 2
            if mids[m] < yf:
                lo = m + 1
            else:
                hi = m
        l = lo
        near = (l < total and abs(mids[l] - yf) <= 2 * guard) or \
               (l > 0 and abs(mids[l - 1] - yf) <= 2 * guard)
        if near:
            l = 0
            on_curve = False
            for r in refined:
                c = compare_to_rational(r, y)
                if c < 0:
                    l += 1
                elif c == 0:
                    on_curve = True
                    break
            if on_curve:
                out.append(True)  # a boundary point belongs to the image
                continue
        out.append(0 < l < total and RegionLabel(k, l) in labels)
    return out


def count_holes(report: Report, window, resolution: int) -> int:
    """Number of bounded complement components of the image, by flood
    fill over a resolution x resolution grid of membership tests.

    The window (xmin, xmax, ymin, ymax) must contain the whole image;
    anything the grid cannot see, it cannot count.
    """
    if resolution < 32:
        raise ValueError("resolution must be at least 32")
    xmin, xmax, ymin, ymax = (Fraction(c) for c in window)
    if xmin >= xmax or ymin >= ymax:
        raise ValueError("window must have positive width and height")
    counter = _SliceCounter(report.boundary)
    criticals = report.criticals
    labels = report.labels_interior
    dx = (xmax - xmin) / resolution
    dy = (ymax - ymin) / resolution
    ys = [ymin + (2 * i + 1) * dy / 2 for i in range(resolution)]
    inside = []
    for j in range(resolution):
        x = xmin + (2 * j + 1) * dx / 2
        for _ in range(5):
            if not isinstance(locate_strip(criticals, x), Coincident):
                break
            # cell center sits exactly on a critical line: nudge within
            # the cell so the column classifies like its neighborhood
            x += dx / (4 * resolution + 1)
        inside.append(_column_inside(counter, criticals, labels, x, ys, dy))
    # flood fill the complement from the border; bounded components of
    # the complement are exactly the components never reached
    seen = [[False] * resolution for _ in range(resolution)]

    def fill(j0, i0):
        queue = deque([(j0, i0)])
        seen[j0][i0] = True
        while queue:
            j, i = queue.popleft()
            for nj, ni in ((j + 1, i), (j - 1, i), (j, i + 1), (j, i - 1)):
                if (0 <= nj < resolution and 0 <= ni < resolution
                        and not seen[nj][ni] and not inside[nj][ni]):
                    seen[nj][ni] = True
                    queue.append((nj, ni))

    for j in range(resolution):
        for i in (0, resolution - 1):
            if not inside[j][i] and not seen[j][i]:
                fill(j, i)
            if not inside[i][j] and not seen[i][j]:
                fill(i, j)
    holes = 0
    for j in range(resolution):
        for i in range(resolution):
            if not inside[j][i] and not seen[j][i]:
                holes += 1
                fill(j, i)
    return holes
