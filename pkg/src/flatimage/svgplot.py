"""Report figures as SVG 1.1.

One fixed canvas, layered back to front: zero contour of p, zero
contour of q, interior samples (red), boundary samples (blue), and a
dashed vertical line at every critical value inside the window.
Critical values are x-coordinates, so the line for a value c is the
vertical line x = c, never the horizontal line y = c.

Contours are traced by marching squares on a float grid.  A grid node
whose float value is too small to trust (below 1e-8 times the local
term magnitude) has its sign re-checked exactly at the rational node
before the surrounding cells commit to a crossing, so spurious slivers
cannot appear along the curves themselves.

Output is deterministic: the same report, window and resolution always
produce identical bytes.
"""

from fractions import Fraction

from .mvpoly import VARS, MvPoly
from .regions import Report, sample_body, sample_boundary

_IX = VARS.index("x")
_IY = VARS.index("y")

_W, _H, _MARGIN = 800, 600, 40
_SCATTER_CAP = 1200
_TRUST = 1e-8

_STYLE_P = 'fill="none" stroke="#7b3294" stroke-width="1.4"'
_STYLE_Q = 'fill="none" stroke="#008837" stroke-width="1.4"'
_STYLE_CRITICAL = ('stroke="#888888" stroke-width="0.8" '
                   'stroke-dasharray="4 3"')
_FILL_INTERIOR = "#d62728"
_FILL_BOUNDARY = "#1f77b4"


def _compile_curve(p: MvPoly):
    """[(float coefficient, x-exponent, y-exponent)] for a plane curve."""
    terms = []
    for exp, coef in sorted(p.terms.items()):
        if any(e and i not in (_IX, _IY) for i, e in enumerate(exp)):
            raise ValueError("curve polynomial involves non-plane variables")
        terms.append((float(coef), exp[_IX], exp[_IY]))
    return terms


def _eval_scaled(terms, x: float, y: float):
    value = scale = 0.0
    for c, ex, ey in terms:
        t = c * x ** ex * y ** ey
        value += t
        scale += abs(t)
    return value, scale


def _node_values(p, terms, xs_f, ys_f, xs_q, ys_q):
    """Grid of float values with exact sign corrections near zero."""
    rows = []
    for j, y in enumerate(ys_f):
        row = []
        for i, x in enumerate(xs_f):
            v, scale = _eval_scaled(terms, x, y)
            if abs(v) < _TRUST * scale:
                exact = p.evaluate({"x": xs_q[i], "y": ys_q[j]})
                if exact == 0:
                    v = 0.0
                elif (exact > 0) != (v > 0):
                    v = abs(v) if exact > 0 else -abs(v)
                    if v == 0.0:
                        v = 1e-300 if exact > 0 else -1e-300
            row.append(v)
        rows.append(row)
    return rows


def _crossing(xa, ya, va, xb, yb, vb):
    d = va - vb
    t = 0.5 if d == 0.0 else min(max(va / d, 0.0), 1.0)
    return (xa + t * (xb - xa), ya + t * (yb - ya))


def _contour_segments(vals, terms, xs_f, ys_f):
    segments = []
    for j in range(len(ys_f) - 1):
        y0, y1 = ys_f[j], ys_f[j + 1]
        for i in range(len(xs_f) - 1):
            x0, x1 = xs_f[i], xs_f[i + 1]
            va, vb = vals[j][i], vals[j][i + 1]
            vc, vd = vals[j + 1][i + 1], vals[j + 1][i]
            crossings = {}
            if (va >= 0) != (vb >= 0):
                crossings["b"] = _crossing(x0, y0, va, x1, y0, vb)
            if (vb >= 0) != (vc >= 0):
                crossings["r"] = _crossing(x1, y0, vb, x1, y1, vc)
            if (vd >= 0) != (vc >= 0):
                crossings["t"] = _crossing(x0, y1, vd, x1, y1, vc)
            if (va >= 0) != (vd >= 0):
                crossings["l"] = _crossing(x0, y0, va, x0, y1, vd)
            if len(crossings) == 2:
                segments.append(tuple(crossings[k] for k in sorted(crossings)))
            elif len(crossings) == 4:
                # saddle: the center sign decides which corners pair up
                center, _ = _eval_scaled(terms, (x0 + x1) / 2, (y0 + y1) / 2)
                if (center >= 0) == (va >= 0):
                    pairs = (("b", "r"), ("t", "l"))
                else:
                    pairs = (("b", "l"), ("t", "r"))
                for a, b in pairs:
                    segments.append((crossings[a], crossings[b]))
    return segments


def _image_points(problem, body_points):
    names = problem.body_vars
    out = []
    for pt in body_points:
        env = dict(zip(names, pt))
        out.append((problem.f.evaluate(env), problem.g.evaluate(env)))
    return out


def render_svg(report: Report, window, resolution: int) -> bytes:
    """Render the report over window = (xmin, xmax, ymin, ymax).

    resolution is the contour grid size per axis (at least 64).  Raises
    ValueError when the window excludes every regenerated sample.
    """
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    xmin, xmax, ymin, ymax = (Fraction(c) for c in window)
    if xmin >= xmax or ymin >= ymax:
        raise ValueError("window must have positive width and height")

    problem = report.problem
    n_int = min(report.samples_used["interior"], _SCATTER_CAP)
    n_bnd = min(report.samples_used["boundary"], _SCATTER_CAP)
    interior = _image_points(
        problem, sample_body(problem, n_int, report.seed)) if n_int else []
    boundary = _image_points(
        problem, sample_boundary(problem, n_bnd, report.seed)) if n_bnd else []

    def visible(pts):
        return [(x, y) for x, y in pts
                if xmin <= x <= xmax and ymin <= y <= ymax]

    interior, boundary = visible(interior), visible(boundary)
    if not interior and not boundary:
        raise ValueError("window excludes all samples")

    fx0, fx1, fy0, fy1 = map(float, (xmin, xmax, ymin, ymax))
    sx = (_W - 2 * _MARGIN) / (fx1 - fx0)
    sy = (_H - 2 * _MARGIN) / (fy1 - fy0)

    def px(x):
        return _MARGIN + (float(x) - fx0) * sx

    def py(y):
        return _H - _MARGIN - (float(y) - fy0) * sy

    dx, dy = (xmax - xmin) / resolution, (ymax - ymin) / resolution
    xs_q = [xmin + i * dx for i in range(resolution + 1)]
    ys_q = [ymin + j * dy for j in range(resolution + 1)]
    xs_f, ys_f = [float(x) for x in xs_q], [float(y) for y in ys_q]

    def contour_path(curve):
        terms = _compile_curve(curve)
        vals = _node_values(curve, terms, xs_f, ys_f, xs_q, ys_q)
        parts = []
        for (ax, ay), (bx, by) in _contour_segments(vals, terms, xs_f, ys_f):
            parts.append("M %.2f %.2f L %.2f %.2f"
                         % (px(ax), py(ay), px(bx), py(by)))
        return " ".join(parts)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%d" height="%d" viewBox="0 0 %d %d">' % (_W, _H, _W, _H),
        '<rect width="%d" height="%d" fill="white"/>' % (_W, _H),
    ]
    bp = report.boundary
    if bp.p is not None:
        out.append('<path %s d="%s"/>' % (_STYLE_P, contour_path(bp.p)))
    out.append('<path %s d="%s"/>' % (_STYLE_Q, contour_path(bp.q)))
    for fill, pts in ((_FILL_INTERIOR, interior), (_FILL_BOUNDARY, boundary)):
        out.append('<g fill="%s">' % fill)
        for x, y in pts:
            out.append('<circle cx="%.2f" cy="%.2f" r="1.8"/>'
                       % (px(x), py(y)))
        out.append('</g>')
    for value in report.criticals.values:
        c = value.value() if value.is_rational() else value.approx()
        if xmin <= c <= xmax:
            out.append('<line x1="%.2f" y1="%.2f" x2="%.2f" y2="%.2f" %s/>'
                       % (px(c), py(ymax), px(c), py(ymin), _STYLE_CRITICAL))
    out.append('</svg>')
    return ("\n".join(out) + "\n").encode("utf-8")
