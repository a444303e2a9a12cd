"""Boundary curves of the planar image of a polynomial map.

A polynomial map (f, g) squashes a solid ball (three body variables)
or a disk (two) onto the plane.  The boundary of the image lies on two
algebraic curves: p, the branch curve of the map itself, coming from
the rank-drop locus of the Jacobian of (f, g), and q, the branch curve
of the map restricted to the body boundary h = 0.  Each is the
principal generator of an elimination ideal.

Eliminating through a block order is exact but can be very expensive,
so the default route implicitizes instead: a plane polynomial P lies in
the elimination ideal of I + (x - f, y - g) exactly when P(f, g) falls
in I, so the sought curve spans the kernel of the substitution map into
the quotient ring by I.  The kernel is found degree by degree: normal
forms of f^i g^j modulo a small Groebner basis of I are accumulated as
exact rational columns, rank is tracked modulo a large prime (a full
rank certificate modulo p is a proof of full rank over the rationals),
and the first modular dependency is re-solved and verified exactly, so
a bad prime can cause a retry but never a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from heapq import heapify, heappop, heappush
from typing import Optional

from .algebra import canonicalize, squarefree_part
from .errors import DegenerateInputError
from .groebner import (
    MonomialOrder,
    _mul_mono,
    _resolve_budget,
    divides,
    eliminate,
    groebner_basis,
    pack,
    principal_generator,
    quotient,
)
from .mvpoly import MvPoly

__all__ = [
    "FlatteningProblem",
    "BoundaryPair",
    "BoundaryDiagnostics",
    "branch_curve_map",
    "branch_curve_restricted",
    "compute_boundary",
    "canonicalize",
    "default_body",
    "jacobian_minors",
    "jacobian3_det",
]

BALL_VARS = ("u", "v", "w")
PANCAKE_VARS = ("u", "v")


def _body_vars(mode: str) -> tuple:
    return BALL_VARS if mode == "ball" else PANCAKE_VARS


def default_body(mode: str) -> MvPoly:
    """1 minus the sum of squares: unit ball or unit disk, nonnegative
    inside, zero on the boundary."""
    h = MvPoly.constant(1)
    for n in _body_vars(mode):
        h = h - MvPoly.var(n) ** 2
    return h


@dataclass(frozen=True)
class FlatteningProblem:
    """A map-the-body-to-the-plane instance.

    mode "ball" maps the body {h >= 0} in (u, v, w); mode "pancake"
    maps {h >= 0} in (u, v).  When h is omitted it defaults to the unit
    sphere or unit circle constraint.  That {h >= 0} is compact with a
    smooth boundary is an assumption recorded on the caller, not
    machine-checked.
    """

    f: MvPoly
    g: MvPoly
    h: Optional[MvPoly] = None
    mode: str = "ball"

    def __post_init__(self):
        if self.mode not in ("ball", "pancake"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.h is None:
            object.__setattr__(self, "h", default_body(self.mode))
        allowed = set(_body_vars(self.mode))
        for label, poly in (("f", self.f), ("g", self.g), ("h", self.h)):
            if not isinstance(poly, MvPoly):
                raise TypeError(f"{label} must be an MvPoly")
            extra = set(poly.variables) - allowed
            if extra:
                raise ValueError(
                    f"{label} uses variables {sorted(extra)} not allowed in "
                    f"{self.mode} mode")
        if self.f.is_constant() or self.g.is_constant():
            raise ValueError("f and g must be nonconstant")
        if self.h.is_constant():
            raise ValueError("h must be nonconstant")

    @property
    def body_vars(self) -> tuple:
        return _body_vars(self.mode)

    @property
    def degree_profile(self) -> tuple:
        """(d1, d2, e): total degrees of f, g and h."""
        return (self.f.total_degree(), self.g.total_degree(),
                self.h.total_degree())


@dataclass(frozen=True)
class BoundaryDiagnostics:
    """Degeneracy flags attached to a boundary computation."""

    image_lower_dimensional: bool = False
    p_nonexistent: bool = False
    p_non_principal: bool = False
    q_non_principal: bool = False


@dataclass(frozen=True)
class BoundaryPair:
    """The two boundary curves: p may be absent (maps whose Jacobian
    never drops rank), q always exists for nondegenerate input.  Both
    are squarefree and canonical."""

    p: Optional[MvPoly]
    q: MvPoly
    diagnostics: BoundaryDiagnostics


# ---------------------------------------------------------------------------
# critical ideals


def jacobian_minors(f: MvPoly, g: MvPoly, mode: str = "ball") -> list:
    """Rank-drop equations of the Jacobian of (f, g): the three 2x2
    minors in ball mode, the single 2x2 determinant in pancake mode."""
    names = _body_vars(mode)
    df = [f.diff(n) for n in names]
    dg = [g.diff(n) for n in names]
    out = []
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            out.append(df[i] * dg[j] - df[j] * dg[i])
    return out


def jacobian3_det(f: MvPoly, g: MvPoly, h: MvPoly) -> MvPoly:
    """Determinant of the Jacobian of (f, g, h) with respect to u, v, w."""
    (a, b, c), (d, e, k), (l, m, n) = (
        [p.diff(name) for name in BALL_VARS] for p in (f, g, h))
    return a * (e * n - k * m) - b * (d * n - k * l) + c * (d * m - e * l)


def _sweep_cap(mode: str, d1: int, d2: int, e: int, which: str) -> int:
    """Degree bound for the image curve, from Bezout counts on the
    critical locus times the fiber degree of a generic line pullback."""
    m = max(d1, d2)
    if which == "p":
        if mode == "pancake":
            delta = d1 + d2 - 2
        else:
            # generic rank-drop curve degree vs the crude intersection
            # bound from two of the three minors; take the larger
            generic = d1 * d1 + d1 * d2 + d2 * d2 - 3 * d1 - 3 * d2 + 3
            delta = max(generic, (d1 + d2 - 2) ** 2)
    else:
        delta = e if mode == "pancake" else e * (d1 + d2 + e - 3)
    return max(delta, 0) * m


# ---------------------------------------------------------------------------
# modular certificates

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin for anything below 3.3e24
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_stream():
    n = (1 << 62) + 1
    while True:
        if _is_prime(n):
            yield n
        n += 2


class _BadPrime(Exception):
    """The working prime hit a denominator or lost rank; retry."""


def _col_mod_p(col: dict, p: int) -> dict:
    out = {}
    for m, c in col.items():
        den = c.denominator % p
        if den == 0:
            raise _BadPrime
        v = c.numerator % p * pow(den, -1, p) % p
        if v:
            out[m] = v
    return out


def _mul_exact(a: dict, b: dict, budget) -> dict:
    budget.spend(len(a) * len(b))
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mm = _mul_mono(m1, m2)
            nv = out.get(mm, 0) + c1 * c2
            if nv:
                out[mm] = nv
            else:
                out.pop(mm, None)
    return out


def _nf_exact(terms: dict, basis: list, order: MonomialOrder, budget) -> dict:
    """Normal form over Q, single descending pass driven by a heap.

    Reducing the monomial m only ever creates monomials strictly below
    m, so popping in decreasing order touches each position once; the
    map is Q-linear, which the column bookkeeping depends on.
    """
    key = order.key
    work = dict(terms)
    negmemo: dict = {}

    def nk(m):
        k = negmemo.get(m)
        if k is None:
            k = tuple(-x for x in key(m))
            negmemo[m] = k
        return k

    heap = [(nk(m), m) for m in work]
    heapify(heap)
    while heap:
        _, m = heappop(heap)
        c = work.get(m)
        if c is None:
            continue
        hit = None
        for lt, lc, fterms in basis:
            if divides(lt, m):
                hit = (lt, lc, fterms)
                break
        if hit is None:
            continue  # m is irreducible and final
        lt, lc, fterms = hit
        budget.spend(len(fterms))
        q = quotient(m, lt)
        scale = Fraction(c, lc)
        del work[m]
        for fm, fv in fterms.items():
            if fm == lt:
                continue
            mm = _mul_mono(fm, q)
            old = work.get(mm)
            nv = (old or 0) - scale * fv
            if nv:
                work[mm] = nv
                if old is None:
                    heappush(heap, (nk(mm), mm))
            else:
                work.pop(mm, None)
    return work


def _solve_exact(A: list, b: list, budget) -> list:
    """Solve the square system A x = b over the rationals.  The caller
    guarantees A is invertible (it was invertible modulo a prime)."""
    n = len(A)
    budget.spend(n * n)
    M = [row[:] + [b[r]] for r, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        for r in range(n):
            if r != col and M[r][col]:
                s = M[r][col] / pv
                Mr, Mc = M[r], M[col]
                for c2 in range(col, n + 1):
                    Mr[c2] -= s * Mc[c2]
    return [M[r][n] / M[r][r] for r in range(n)]


class _ImageCurveFinder:
    """Minimal plane polynomial P with P(f, g) in a given ideal.

    Columns NF(f^i g^j) are built incrementally over the rationals;
    rank bookkeeping runs modulo a 62-bit prime.  A modular full-rank
    prefix certifies exact independence, and the first modular
    dependency is solved and verified exactly, so the output never
    depends on the luck of the prime.
    """

    def __init__(self, ideal_gens, f: MvPoly, g: MvPoly, budget):
        self.order = MonomialOrder("grevlex")
        self.budget = budget
        gb = groebner_basis(ideal_gens, self.order, budget)
        self.gb = []
        for q in gb:
            t = {pack(e): int(c) for e, c in q.terms.items()}
            lt = max(t, key=self.order.key)
            self.gb.append((lt, t[lt], t))
        self.fx = {pack(e): Fraction(c) for e, c in f.terms.items()}
        self.gx = {pack(e): Fraction(c) for e, c in g.terms.items()}
        self.cols: dict = {}

    def _col(self, i: int, j: int) -> dict:
        got = self.cols.get((i, j))
        if got is not None:
            return got
        if i == 0 and j == 0:
            raw = {0: Fraction(1)}
        elif i > 0:
            raw = _mul_exact(self._col(i - 1, j), self.fx, self.budget)
        else:
            raw = _mul_exact(self._col(0, j - 1), self.gx, self.budget)
        col = _nf_exact(raw, self.gb, self.order, self.budget)
        self.cols[(i, j)] = col
        return col

    def search(self, cap: int) -> tuple:
        """(coefficient map of the first kernel element | None, window_ok).

        None means no plane polynomial of total degree <= cap maps into
        the ideal.  window_ok reports whether kernel growth for two
        degrees past the first element matched a principal ideal; a
        False value is decided only after retrying with fresh primes.
        """
        primes = _prime_stream()
        window_failures = 0
        while True:
            p = next(primes)
            if any(lc % p == 0 for _, lc, _ in self.gb):
                continue
            try:
                combo, ok = self._attempt(p, cap)
            except _BadPrime:
                continue
            if combo is not None and not ok and window_failures < 2:
                window_failures += 1
                continue
            return combo, ok

    def _attempt(self, p: int, cap: int) -> tuple:
        key = self.order.key
        ech: list = []      # (pivot monomial, reduced column, pivot inverse)
        piv_ids: list = []
        ncols = npiv = 0
        combo = None
        cand_deg = 0
        window_ok = True
        D = 0
        while True:
            for i in range(D, -1, -1):
                j = D - i
                colp = _col_mod_p(self._col(i, j), p)
                for piv, pivcol, inv in ech:
                    c = colp.get(piv)
                    if c:
                        s = c * inv % p
                        for m, v in pivcol.items():
                            nv = (colp.get(m, 0) - s * v) % p
                            if nv:
                                colp[m] = nv
                            else:
                                colp.pop(m, None)
                ncols += 1
                if colp:
                    piv = max(colp, key=key)
                    ech.append((piv, colp, pow(colp[piv], -1, p)))
                    piv_ids.append((i, j))
                    npiv += 1
                elif combo is None:
                    rows = [e[0] for e in ech]
                    combo = self._certify((i, j), piv_ids, rows)
                    if combo is None:
                        raise _BadPrime
                    cand_deg = D
            if combo is None:
                if D >= cap:
                    return None, True
            else:
                k = D - cand_deg
                if ncols - npiv != (k + 2) * (k + 1) // 2:
                    window_ok = False
                if not window_ok or k >= 2:
                    return combo, window_ok
            D += 1

    def _certify(self, new_id: tuple, piv_ids: list,
                 rows: list) -> "dict | None":
        """Exact dependency of the new column on the pivot columns,
        verified over Q; None when it was a modular artifact.

        `rows` are the echelon pivot monomials; the pivot columns
        restricted to those rows form a square matrix invertible modulo
        the working prime, hence invertible over Q, so the dependency
        coefficients are the unique solution of that subsystem.
        """
        target = self.cols[new_id]
        sol: list = []
        if piv_ids:
            A = [[self.cols[pid].get(r, Fraction(0)) for pid in piv_ids]
                 for r in rows]
            b = [target.get(r, Fraction(0)) for r in rows]
            sol = _solve_exact(A, b, self.budget)
        residual = dict(target)
        for a_c, pid in zip(sol, piv_ids):
            if a_c == 0:
                continue
            for m, v in self.cols[pid].items():
                nv = residual.get(m, 0) - a_c * v
                if nv:
                    residual[m] = nv
                else:
                    residual.pop(m, None)
        if residual:
            return None
        out = {new_id: Fraction(1)}
        for a_c, pid in zip(sol, piv_ids):
            if a_c != 0:
                out[pid] = -a_c
        return out


# ---------------------------------------------------------------------------
# image curve with fallback


def _as_plane_poly(coeffs: dict) -> MvPoly:
    return MvPoly({(0, 0, 0, i, j, 0): c for (i, j), c in coeffs.items()})


def _image_curve(ideal_gens, f: MvPoly, g: MvPoly, mode: str, cap: int,
                 budget) -> tuple:
    """Canonical squarefree polynomial cutting out the closure of the
    (f, g)-image of the ideal's variety, with a non-principality flag.
    Returns (None, False) when the elimination ideal is zero (the image
    is dense in the plane)."""
    bud = _resolve_budget(budget)
    gens = [q for q in ideal_gens if not q.is_zero()]
    finder = _ImageCurveFinder(gens, f, g, bud)
    coeffs, window_ok = finder.search(cap)
    if coeffs is not None and window_ok:
        poly = _as_plane_poly(coeffs)
        return canonicalize(squarefree_part(poly)), False
    # fast path found nothing inside its degree cap, or kernel growth
    # did not look principal: fall back to honest block elimination
    graph = [MvPoly.var("x") - f, MvPoly.var("y") - g]
    elims = eliminate(gens + graph, list(_body_vars(mode)), bud)
    if not elims:
        return None, False
    poly = principal_generator(elims)
    return poly, len(elims) > 1


def _branch_p(minors, f, g, mode, budget) -> tuple:
    d1, d2 = f.total_degree(), g.total_degree()
    cap = _sweep_cap(mode, d1, d2, 0, "p")
    curve, flag = _image_curve(minors, f, g, mode, cap, budget)
    if curve is None or curve.is_constant():
        # unit minors ideal or empty elimination: the map is never
        # critical, the branch curve does not exist
        return None, flag
    return curve, flag


def _branch_q(f, g, h, mode, budget) -> tuple:
    if mode == "ball":
        gens = [h, jacobian3_det(f, g, h)]
    else:
        # the body boundary is already a curve; every point of it is
        # critical for a map to the plane, so no rank condition is added
        gens = [h]
    d1, d2 = f.total_degree(), g.total_degree()
    cap = _sweep_cap(mode, d1, d2, h.total_degree(), "q")
    curve, flag = _image_curve(gens, f, g, mode, cap, budget)
    if curve is None:
        raise DegenerateInputError(
            "restricted branch elimination is empty: the boundary critical "
            "locus does not map to a curve")
    if curve.is_constant():
        raise DegenerateInputError(
            "the critical locus on the body boundary is empty")
    return curve, flag


# ---------------------------------------------------------------------------
# public operations


def branch_curve_map(f: MvPoly, g: MvPoly, mode: str = "ball",
                     budget=None) -> Optional[MvPoly]:
    """Branch curve p of the map (f, g), or None when it does not exist.

    p is the canonical squarefree generator of the elimination ideal of
    the Jacobian rank-drop equations together with the graph equations
    x - f, y - g.  Maps whose Jacobian has full rank everywhere (the
    minors generate the unit ideal, or the elimination comes out empty)
    have no branch curve.
    """
    curve, _ = _branch_p(jacobian_minors(f, g, mode), f, g, mode, budget)
    return curve


def branch_curve_restricted(f: MvPoly, g: MvPoly, h: "MvPoly | None" = None,
                            mode: str = "ball", budget=None) -> MvPoly:
    """Branch curve q of the map restricted to the body boundary h = 0.

    In ball mode the critical locus is the complete intersection of h
    with the 3x3 Jacobian determinant of (f, g, h); in pancake mode the
    boundary curve h = 0 maps to a curve directly.  Raises
    DegenerateInputError when no such curve exists.
    """
    if h is None:
        h = default_body(mode)
    curve, _ = _branch_q(f, g, h, mode, budget)
    return curve


def compute_boundary(problem: FlatteningProblem, budget=None) -> BoundaryPair:
    """Both boundary curves of a flattening problem, with diagnostics.

    Halts with DegenerateInputError when the image of the map is lower
    dimensional (f and g algebraically dependent), which is detected
    exactly by the vanishing of every Jacobian minor.
    """
    f, g, h = problem.f, problem.g, problem.h
    minors = jacobian_minors(f, g, problem.mode)
    if all(m.is_zero() for m in minors):
        raise DegenerateInputError(
            "degenerate image: f and g are algebraically dependent, so the "
            "image lies inside a curve instead of filling a region")
    p, p_flag = _branch_p(minors, f, g, problem.mode, budget)
    q, q_flag = _branch_q(f, g, h, problem.mode, budget)
    diag = BoundaryDiagnostics(
        image_lower_dimensional=False,
        p_nonexistent=p is None,
        p_non_principal=p_flag,
        q_non_principal=q_flag,
    )
    return BoundaryPair(p=p, q=q, diagnostics=diag)
