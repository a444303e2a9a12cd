"""Command line interface.

Subcommands:
    boundary    boundary curves p and q of the flattened image
    criticals   critical x-values of the boundary curves
    regions     full sampling report as versioned JSON
    lissajous   perturbed Chebyshev family: curve, nodes, q, holes
    analyze     closed-form degree/genus/singularity predictions
    hull        sampled convex hull with certified support estimates
    plot        SVG figure of a report

Exit codes: 0 success, 1 usage or input error, 2 degenerate input,
3 resource budget exhausted (budget set via FLATIMAGE_BUDGET).
"""

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .analysis import DegreeProfile, degree_bound, predictions
from .boundary import FlatteningProblem, compute_boundary
from .errors import (DegenerateInputError, ResourceBudgetError, UsageError)
from .hull import hull_report
from .lissajous import (LissajousParams, lissajous_curve, lissajous_nodes,
                        lissajous_problem, lissajous_q)
from .mvpoly import MvPoly
from .polytext import format_poly, parse_poly
from .regions import count_holes, critical_xvalues, flatten_report
from .report_io import _critical_entry, _rat, serialize_report
from .svgplot import _image_points, render_svg
from .regions import sample_body, sample_boundary


def _source_text(value: str) -> str:
    """Inline expression, or the contents of a file when given as
    @path."""
    if not value.startswith("@"):
        return value
    try:
        return Path(value[1:]).read_text(encoding="utf-8").strip()
    except OSError as exc:
        raise UsageError(f"cannot read {value[1:]!r}: {exc.strerror}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")


def _problem_from_args(args) -> FlatteningProblem:
    if args.problem:
        try:
            doc = json.loads(Path(args.problem).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read {args.problem!r}: {exc.strerror}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.problem!r} is not valid JSON: {exc}")
        f_text, g_text = doc.get("f"), doc.get("g")
        h_text, mode = doc.get("h"), doc.get("mode", "ball")
        if mode not in ("ball", "pancake"):
            raise UsageError(f"unknown mode {mode!r}")
    else:
        f_text = _source_text(args.f) if args.f else None
        g_text = _source_text(args.g) if args.g else None
        h_text = _source_text(args.h) if args.h else None
        mode = args.mode
    if not f_text or not g_text:
        raise UsageError("both --f and --g are required (or --problem FILE)")
    names = ("u", "v") if mode == "pancake" else ("u", "v", "w")
    h = parse_poly(h_text, names) if h_text else None
    return FlatteningProblem(parse_poly(f_text, names),
                             parse_poly(g_text, names), h, mode=mode)


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(args, doc):
    _emit(args, json.dumps(doc, indent=2) + "\n")


def _boundary_doc(bp) -> dict:
    d = bp.diagnostics
    return {
        "p": None if bp.p is None else format_poly(bp.p),
        "q": format_poly(bp.q),
        "diagnostics": {
            "image_lower_dimensional": d.image_lower_dimensional,
            "p_nonexistent": d.p_nonexistent,
            "p_non_principal": d.p_non_principal,
            "q_non_principal": d.q_non_principal,
        },
    }


def _defining_text(value) -> str:
    t = MvPoly.var("t")
    poly = MvPoly.constant(0)
    for i, c in enumerate(value.defining):
        poly = poly + MvPoly.constant(c) * t ** i
    return format_poly(poly)


def _critical_line(value, sources) -> str:
    tags = ", ".join(sorted(sources))
    if value.is_rational():
        return f"{value.value()}  [{tags}]"
    return (f"root of {_defining_text(value)} in ({value.lo}, {value.hi})"
            f" ~ {float(value.approx()):.6f}  [{tags}]")


def _cmd_boundary(args) -> int:
    bp = compute_boundary(_problem_from_args(args))
    if args.json:
        _emit_json(args, _boundary_doc(bp))
        return 0
    lines = ["p = " + (format_poly(bp.p) if bp.p is not None
                       else "(does not exist)"),
             "q = " + format_poly(bp.q)]
    d = bp.diagnostics
    for flag in ("image_lower_dimensional", "p_nonexistent",
                 "p_non_principal", "q_non_principal"):
        if getattr(d, flag):
            lines.append("note: " + flag.replace("_", " "))
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_criticals(args) -> int:
    bp = compute_boundary(_problem_from_args(args))
    criticals = critical_xvalues(bp)
    pairs = list(zip(criticals.values, criticals.sources))
    if args.json:
        _emit_json(args, {"criticals": [_critical_entry(v, s)
                                        for v, s in pairs]})
        return 0
    _emit(args, "\n".join(_critical_line(v, s) for v, s in pairs) + "\n")
    return 0


def _cmd_regions(args) -> int:
    problem = _problem_from_args(args)
    report = flatten_report(problem, args.samples, args.seed,
                            workers=args.workers)
    _emit(args, serialize_report(report))
    return 0


def _cmd_lissajous(args) -> int:
    params = LissajousParams(args.d1, args.d2, _fraction(args.eps))
    curve = lissajous_curve(params)
    _, node_count = lissajous_nodes(params)
    q, newton = lissajous_q(params)
    doc = {"curve": format_poly(curve),
           "nodes": node_count,
           "q": format_poly(q),
           "q_degree": newton.degree,
           "q_degree_bound": newton.degree_bound,
           "newton_verdict": newton.verdict}
    lines = [f"curve = {doc['curve']}",
             f"certified nodes = {node_count}",
             f"q degree = {newton.degree} (bound {newton.degree_bound})",
             f"newton: {newton.verdict}"]
    if args.holes:
        report = flatten_report(lissajous_problem(params), args.samples,
                                args.seed)
        pad = 1 + 2 * params.eps
        holes = count_holes(report, (-pad, pad, -pad, pad), args.resolution)
        doc["holes"] = holes
        lines.append(f"holes = {holes}")
    if args.json:
        _emit_json(args, doc)
    else:
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _cmd_analyze(args) -> int:
    profile = DegreeProfile(args.d1, args.d2, args.e)
    pred = predictions(profile)
    bound = degree_bound(profile)
    if args.json:
        _emit_json(args, {
            "d1": args.d1, "d2": args.d2, "e": args.e,
            "D_p": pred.D_p, "D_q": pred.D_q,
            "deg_p": pred.deg_p, "deg_q": pred.deg_q,
            "genus_p": pred.genus_p, "genus_q": pred.genus_q,
            "sing_p": pred.sing_p, "sing_q": pred.sing_q,
            "newton_p": [[_rat(x), _rat(y)] for x, y in pred.newt_p.vertices],
            "newton_q": [[_rat(x), _rat(y)] for x, y in pred.newt_q.vertices],
            "degree_bound": bound})
        return 0
    _emit(args, "\n".join([
        f"(d1, d2, e) = ({args.d1}, {args.d2}, {args.e})",
        f"p: ambient degree {pred.D_p}, plane degree {pred.deg_p}, "
        f"genus {pred.genus_p}, singular points {pred.sing_p}",
        f"q: ambient degree {pred.D_q}, plane degree {pred.deg_q}, "
        f"genus {pred.genus_q}, singular points {pred.sing_q}",
        f"degree bound = {bound}"]) + "\n")
    return 0


def _cmd_hull(args) -> int:
    report = hull_report(_problem_from_args(args), args.samples,
                         args.directions, args.seed)
    if args.json:
        _emit_json(args, {
            "samples": report.n, "directions": report.m, "seed": report.seed,
            "vertices": [[_rat(x), _rat(y)]
                         for x, y in report.inner.vertices],
            "halfplanes": [{"alpha": _rat(a), "beta": _rat(b),
                            "gamma": _rat(g), "gamma_float": float(g)}
                           for a, b, g in report.halfplanes],
            "gap": report.gap})
        return 0
    lines = [f"inner hull: {len(report.inner.vertices)} vertices "
             f"from {report.n} samples"]
    for a, b, g in report.halfplanes:
        lines.append(f"  direction ({a}, {b}): support <= {float(g):.6f}")
    lines.append(f"gap estimate = {report.gap:.3g}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


def _parse_window(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("window must be xmin,xmax,ymin,ymax")
    return tuple(_fraction(p.strip()) for p in parts)


def _auto_window(report) -> tuple:
    problem = report.problem
    pts = []
    n_i = min(report.samples_used["interior"], 400)
    n_b = min(report.samples_used["boundary"], 400)
    if n_i:
        pts += _image_points(problem, sample_body(problem, n_i, report.seed))
    if n_b:
        pts += _image_points(problem,
                             sample_boundary(problem, n_b, report.seed))
    if not pts:
        raise DegenerateInputError("no samples available to frame a window")
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    pad_x = (max(xs) - min(xs)) / 10 or Fraction(1, 10)
    pad_y = (max(ys) - min(ys)) / 10 or Fraction(1, 10)
    return (min(xs) - pad_x, max(xs) + pad_x,
            min(ys) - pad_y, max(ys) + pad_y)


def _cmd_plot(args) -> int:
    problem = _problem_from_args(args)
    report = flatten_report(problem, args.samples, args.seed)
    window = _parse_window(args.window) if args.window \
        else _auto_window(report)
    svg = render_svg(report, window, args.resolution)
    if args.out:
        Path(args.out).write_bytes(svg)
    else:
        sys.stdout.buffer.write(svg)
    return 0


_DISPATCH = {
    "boundary": _cmd_boundary,
    "criticals": _cmd_criticals,
    "regions": _cmd_regions,
    "lissajous": _cmd_lissajous,
    "analyze": _cmd_analyze,
    "hull": _cmd_hull,
    "plot": _cmd_plot,
}


def _add_problem_flags(sub):
    sub.add_argument("--f", help="first map component (expression or @file)")
    sub.add_argument("--g", help="second map component (expression or @file)")
    sub.add_argument("--h", help="body polynomial h >= 0 (default unit body)")
    sub.add_argument("--mode", choices=("ball", "pancake"), default="ball")
    sub.add_argument("--problem", metavar="PATH",
                     help="JSON file with f, g, h, mode")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatimage",
        description="boundary curves, cell labels and hulls of "
                    "polynomial images of a ball or disk")
    subs = parser.add_subparsers(dest="command", required=True)

    def sub(name, help_text, problem=True, json_flag=True):
        s = subs.add_parser(name, help=help_text)
        if problem:
            _add_problem_flags(s)
        if json_flag:
            s.add_argument("--json", action="store_true",
                           help="emit JSON instead of text")
        s.add_argument("--out", metavar="PATH",
                       help="write output to a file instead of stdout")
        return s

    sub("boundary", "compute the boundary curves p and q")
    sub("criticals", "list critical x-values with their sources")

    s = sub("regions", "sample the image and label its cells",
            json_flag=False)
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)

    s = sub("lissajous", "perturbed Chebyshev family artifacts",
            problem=False)
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--eps", default="1/10", help="thickening (rational)")
    s.add_argument("--holes", action="store_true",
                   help="also count holes of the thickened image")
    s.add_argument("--samples", type=int, default=4000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--resolution", type=int, default=400)

    s = sub("analyze", "degree, genus and singularity predictions",
            problem=False)
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--e", type=int, required=True)

    s = sub("hull", "sampled convex hull with support certificates")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--directions", type=int, default=16)
    s.add_argument("--seed", type=int, default=0)

    s = sub("plot", "render a report as SVG", json_flag=False)
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--window", help="xmin,xmax,ymin,ymax (default: fit)")
    s.add_argument("--resolution", type=int, default=128)
    return parser


def run_cli(argv) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        return _DISPATCH[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DegenerateInputError as exc:
        print(f"degenerate input: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
