"""Versioned JSON serialization of the full flattening report.

Schema "flatimage-report/1": polynomials as canonical strings, all
rationals as "numerator/denominator" strings, algebraic criticals as
defining polynomial plus isolating interval.  Field order is fixed, so
serializing the same report twice gives identical bytes, and a
serialize/deserialize round trip restores every field exactly.
"""

import json
from fractions import Fraction

from .boundary import BoundaryDiagnostics, BoundaryPair, FlatteningProblem
from .errors import UsageError
from .polytext import format_poly, parse_poly
from .realroots import CriticalList, RealAlgebraic
from .regions import RegionLabel, Report

SCHEMA = "flatimage-report/1"

_CURVE_VARS = ("x", "y")


def _rat(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _unrat(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))


def _critical_entry(value: RealAlgebraic, sources: frozenset) -> dict:
    if value.is_rational():
        return {"value": _rat(value.value()), "sources": sorted(sources)}
    return {"defining": list(value.defining),
            "interval": [_rat(value.lo), _rat(value.hi)],
            "sources": sorted(sources)}


def _critical_restore(entry: dict):
    sources = frozenset(entry["sources"])
    if "value" in entry:
        return RealAlgebraic.from_rational(_unrat(entry["value"])), sources
    lo, hi = entry["interval"]
    value = RealAlgebraic(defining=tuple(entry["defining"]),
                          lo=_unrat(lo), hi=_unrat(hi))
    return value, sources


def report_document(report: Report) -> dict:
    """The report as a plain JSON-ready dictionary."""
    problem = report.problem
    bp = report.boundary
    flags = bp.diagnostics
    return {
        "schema": SCHEMA,
        "problem": {
            # scaled=False keeps rational coefficients verbatim, so the
            # restored problem is the one that produced the report
            "f": format_poly(problem.f, scaled=False),
            "g": format_poly(problem.g, scaled=False),
            "h": format_poly(problem.h, scaled=False),
            "mode": problem.mode,
        },
        "boundary": {
            "p": None if bp.p is None else format_poly(bp.p),
            "q": format_poly(bp.q),
            "diagnostics": {
                "image_lower_dimensional": flags.image_lower_dimensional,
                "p_nonexistent": flags.p_nonexistent,
                "p_non_principal": flags.p_non_principal,
                "q_non_principal": flags.q_non_principal,
            },
        },
        "criticals": [_critical_entry(v, s) for v, s in
                      zip(report.criticals.values, report.criticals.sources)],
        "labels_interior": sorted([lab.k, lab.l]
                                  for lab in report.labels_interior),
        "labels_boundary": sorted([lab.k, lab.l]
                                  for lab in report.labels_boundary),
        "samples": {"interior": report.samples_used["interior"],
                    "boundary": report.samples_used["boundary"]},
        "seed": report.seed,
        "diagnostics": dict(report.diagnostics),
    }


def serialize_report(report: Report) -> str:
    return json.dumps(report_document(report), indent=2) + "\n"


def deserialize_report(text: str) -> Report:
    """Rebuild a Report from its JSON text, exactly."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"report is not valid JSON: {exc}") from exc
    if doc.get("schema") != SCHEMA:
        raise UsageError(
            f"unsupported report schema {doc.get('schema')!r}; "
            f"expected {SCHEMA!r}")
    prob = doc["problem"]
    mode = prob["mode"]
    body_vars = ("u", "v") if mode == "pancake" else ("u", "v", "w")
    problem = FlatteningProblem(
        f=parse_poly(prob["f"], body_vars),
        g=parse_poly(prob["g"], body_vars),
        h=parse_poly(prob["h"], body_vars),
        mode=mode)
    bnd = doc["boundary"]
    flags = bnd["diagnostics"]
    boundary = BoundaryPair(
        p=None if bnd["p"] is None else parse_poly(bnd["p"], _CURVE_VARS),
        q=parse_poly(bnd["q"], _CURVE_VARS),
        diagnostics=BoundaryDiagnostics(
            image_lower_dimensional=flags["image_lower_dimensional"],
            p_nonexistent=flags["p_nonexistent"],
            p_non_principal=flags["p_non_principal"],
            q_non_principal=flags["q_non_principal"]))
    restored = [_critical_restore(entry) for entry in doc["criticals"]]
    criticals = CriticalList(values=tuple(v for v, _ in restored),
                             sources=tuple(s for _, s in restored))
    return Report(
        problem=problem,
        boundary=boundary,
        criticals=criticals,
        labels_interior=frozenset(RegionLabel(k, l)
                                  for k, l in doc["labels_interior"]),
        labels_boundary=frozenset(RegionLabel(k, l)
                                  for k, l in doc["labels_boundary"]),
        samples_used={"interior": doc["samples"]["interior"],
                      "boundary": doc["samples"]["boundary"]},
        seed=doc["seed"],
        diagnostics=dict(doc["diagnostics"]))
