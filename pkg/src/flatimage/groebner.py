"""Groebner bases over the rationals with elimination orders.

The engine works on integer-primitive polynomials whose monomials are
packed into single machine-width-friendly integers: six 16-bit exponent
fields separated by guard bits, so divisibility testing and quotient
extraction are a couple of integer operations.  Buchberger's algorithm
runs with normal (smallest-lcm) pair selection, Gebauer-Moller pair
pruning, full tail reduction, periodic content clearing, and a hard
budget on reduction steps so runaway eliminations fail cleanly instead
of hanging.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from heapq import heappop, heappush
from typing import Iterable, Sequence

from .errors import ResourceBudgetError
from .mvpoly import MvPoly, VAR_INDEX, VARS

_NVARS = len(VARS)
_BITS = 16
_STRIDE = _BITS + 1
_FIELD = (1 << _BITS) - 1
_GUARDS = 0
for _i in range(_NVARS):
    _GUARDS |= 1 << (_STRIDE * _i + _BITS)

DEFAULT_BUDGET = 10 ** 7
BUDGET_ENV = "FLATIMAGE_BUDGET"


def pack(exp: Sequence[int]) -> int:
    m = 0
    for i, e in enumerate(exp):
        if e:
            if e > _FIELD:
                raise ResourceBudgetError(
                    "monomial degree exceeds the packed-field capacity")
            m |= e << (_STRIDE * i)
    return m


def unpack(m: int) -> tuple:
    return tuple((m >> (_STRIDE * i)) & _FIELD for i in range(_NVARS))


def _mul_mono(a: int, b: int) -> int:
    s = a + b
    if s & _GUARDS:
        raise ResourceBudgetError("monomial degree exceeds the packed-field capacity")
    return s


def divides(b: int, a: int) -> bool:
    """Whether monomial b divides monomial a."""
    return ((a | _GUARDS) - b) & _GUARDS == _GUARDS


def quotient(a: int, b: int) -> int:
    """a / b for monomials, assuming divisibility."""
    return ((a | _GUARDS) - b) ^ _GUARDS


def mono_lcm(a: int, b: int) -> int:
    t = (a | _GUARDS) - b
    g = t & _GUARDS
    mask = (g >> _BITS) * _FIELD
    return (a & mask) | (b & ~mask & ~_GUARDS)


class MonomialOrder:
    """A monomial order on the fixed variable universe.

    kind is one of "lex", "grevlex" or "block".  Precedence within lex
    and grevlex (and within each block) follows the universe order
    u, v, w, x, y, t restricted to the given variables, earlier names
    higher.  A block order compares block by block, graded reverse
    lexicographically inside each, so putting the variables to be
    eliminated in the first block yields an elimination order.
    """

    def __init__(self, kind: str = "grevlex", blocks: "Sequence[Sequence[str]] | None" = None):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        if (blocks is not None) != (kind == "block"):
            raise ValueError("blocks must be given exactly for the block order")
        self.kind = kind
        if blocks is not None:
            seen: set = set()
            norm = []
            for blk in blocks:
                idx = tuple(sorted(VAR_INDEX[n] for n in blk))
                if not idx or seen & set(idx):
                    raise ValueError("blocks must be disjoint and nonempty")
                seen |= set(idx)
                norm.append(idx)
            self.blocks = tuple(norm)
        else:
            self.blocks = (tuple(range(_NVARS)),)
        self._memo: dict = {}

    @classmethod
    def elimination(cls, drop: Iterable[str]) -> "MonomialOrder":
        drop_idx = {VAR_INDEX[n] for n in drop}
        first = [VARS[i] for i in sorted(drop_idx)]
        rest = [VARS[i] for i in range(_NVARS) if i not in drop_idx]
        if not rest:
            return cls("grevlex")
        return cls("block", blocks=(first, rest))

    def key(self, m: int):
        k = self._memo.get(m)
        if k is None:
            exp = unpack(m)
            if self.kind == "lex":
                k = exp
            else:
                parts = []
                for idx in self.blocks:
                    es = [exp[i] for i in idx]
                    parts.append(sum(es))
                    parts.extend(-e for e in reversed(es))
                k = tuple(parts)
            self._memo[m] = k
        return k

    def leading(self, terms: dict) -> int:
        key = self.key
        return max(terms, key=key)

    def sorted_monomials(self, terms: dict, reverse: bool = True) -> list:
        return sorted(terms, key=self.key, reverse=reverse)

    @property
    def eliminated(self) -> tuple:
        """Variable names of the first block (empty unless this is an
        elimination order with more than one block)."""
        if self.kind != "block" or len(self.blocks) < 2:
            return ()
        return tuple(VARS[i] for i in self.blocks[0])

    def __repr__(self) -> str:
        if self.kind == "block":
            blks = tuple(tuple(VARS[i] for i in idx) for idx in self.blocks)
            return f"MonomialOrder('block', blocks={blks})"
        return f"MonomialOrder({self.kind!r})"


class IdealGens:
    """An ideal presented by generators together with a monomial order.

    Zero generators are rejected; an empty generator list, meaning the
    zero ideal, is allowed.
    """

    __slots__ = ("generators", "order")

    def __init__(self, generators: Iterable[MvPoly],
                 order: "MonomialOrder | None" = None):
        gens = tuple(generators)
        if any(p.is_zero() for p in gens):
            raise ValueError("zero generators are not allowed")
        self.generators = gens
        self.order = order if order is not None else MonomialOrder("grevlex")

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __getitem__(self, i) -> MvPoly:
        return self.generators[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IdealGens):
            return NotImplemented
        return (self.generators == other.generators
                and self.order.kind == other.order.kind
                and self.order.blocks == other.order.blocks)

    def __repr__(self) -> str:
        return f"IdealGens({list(self.generators)}, order={self.order!r})"


def _to_packed(p: MvPoly) -> dict:
    """Integer-primitive packed-term dict from an MvPoly."""
    if p.is_zero():
        return {}
    den = math.lcm(*(c.denominator for c in p.terms.values()))
    num = math.gcd(*(c.numerator for c in p.terms.values()))
    scale = Fraction(den, num)
    return {pack(exp): int(c * scale) for exp, c in p.terms.items()}


def _from_packed(terms: dict) -> MvPoly:
    return MvPoly({unpack(m): Fraction(c) for m, c in terms.items()})


def _clear_content(terms: dict) -> dict:
    if not terms:
        return terms
    g = math.gcd(*terms.values())
    if g > 1:
        return {m: c // g for m, c in terms.items()}
    return terms


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise ResourceBudgetError(
                "computation exceeded the step budget; raise it via the "
                f"{BUDGET_ENV} environment variable or the budget argument")


def _resolve_budget(budget: "int | _Budget | None") -> _Budget:
    if isinstance(budget, _Budget):
        return budget  # share an existing allowance across stages
    if budget is None:
        raw = os.environ.get(BUDGET_ENV)
        budget = int(raw) if raw else DEFAULT_BUDGET
    return _Budget(int(budget))


def _reduce_lead(terms: dict, basis: list, order: MonomialOrder,
                 budget: _Budget) -> dict:
    """Reduce until the leading term is irreducible (or zero)."""
    key = order.key
    steps = 0
    while terms:
        lead = max(terms, key=key)
        c = terms[lead]
        hit = None
        for lt, lc, fterms in basis:
            if divides(lt, lead):
                hit = (lt, lc, fterms)
                break
        if hit is None:
            break
        lt, lc, fterms = hit
        budget.spend(len(fterms))
        q = quotient(lead, lt)
        g = math.gcd(c, lc)
        scale_self = lc // g
        scale_f = c // g
        if scale_self != 1:
            terms = {m: v * scale_self for m, v in terms.items()}
        for m, v in fterms.items():
            mm = _mul_mono(m, q)
            nv = terms.get(mm, 0) - scale_f * v
            if nv:
                terms[mm] = nv
            else:
                terms.pop(mm, None)
        steps += 1
        if steps % 8 == 0:  # keep coefficient growth in check
            terms = _clear_content(terms)
    return _clear_content(terms) if terms else terms


def _normal_form(terms: dict, basis: list, order: MonomialOrder,
                 budget: _Budget) -> dict:
    """Fully reduced form: no term is divisible by any basis leading term.

    Reductions rescale the whole polynomial (fraction-free), so the
    algorithm works on one dict throughout and marks monomials as
    finished instead of splitting them off."""
    key = order.key
    work = _clear_content(dict(terms))
    frozen: set = set()
    while True:
        pending = [m for m in work if m not in frozen]
        if not pending:
            return work
        lead = max(pending, key=key)
        c = work[lead]
        hit = None
        for lt, lc, fterms in basis:
            if divides(lt, lead):
                hit = (lt, lc, fterms)
                break
        if hit is None:
            frozen.add(lead)
            continue
        lt, lc, fterms = hit
        budget.spend(len(fterms))
        q = quotient(lead, lt)
        g = math.gcd(c, lc)
        scale_self = lc // g
        scale_f = c // g
        if scale_self != 1:
            work = {m: v * scale_self for m, v in work.items()}
        for m, v in fterms.items():
            mm = _mul_mono(m, q)
            nv = work.get(mm, 0) - scale_f * v
            if nv:
                work[mm] = nv
            else:
                work.pop(mm, None)
        work = _clear_content(work)


def _normal_form_exact(terms: dict, basis: list, order: MonomialOrder,
                       budget: _Budget) -> dict:
    """Normal form over the rationals, coefficients kept exact.

    Unlike the fraction-free reducer this never rescales the input, so
    the map terms -> normal form is Q-linear; the implicitization path
    relies on that linearity to combine stored normal forms.
    """
    key = order.key
    work = dict(terms)
    frozen: set = set()
    while True:
        pending = [m for m in work if m not in frozen]
        if not pending:
            return work
        lead = max(pending, key=key)
        hit = None
        for lt, lc, fterms in basis:
            if divides(lt, lead):
                hit = (lt, lc, fterms)
                break
        if hit is None:
            frozen.add(lead)
            continue
        lt, lc, fterms = hit
        budget.spend(len(fterms))
        q = quotient(lead, lt)
        scale = Fraction(work[lead], lc)
        for m, v in fterms.items():
            mm = _mul_mono(m, q)
            nv = work.get(mm, 0) - scale * v
            if nv:
                work[mm] = nv
            else:
                work.pop(mm, None)


def _spoly(fi, fj, budget: _Budget) -> dict:
    lti, lci, ti = fi
    ltj, lcj, tj = fj
    L = mono_lcm(lti, ltj)
    qi = quotient(L, lti)
    qj = quotient(L, ltj)
    l = lci * lcj // math.gcd(lci, lcj)
    si = l // lci
    sj = l // lcj
    budget.spend(len(ti) + len(tj))
    out: dict = {}
    for m, v in ti.items():
        out[_mul_mono(m, qi)] = si * v
    for m, v in tj.items():
        mm = _mul_mono(m, qj)
        nv = out.get(mm, 0) - sj * v
        if nv:
            out[mm] = nv
        else:
            out.pop(mm, None)
    return out


def groebner_basis(gens: Iterable[MvPoly], order: "MonomialOrder | None" = None,
                   budget: "int | None" = None) -> list:
    """Reduced Groebner basis of the ideal generated by `gens`.

    Buchberger with normal pair selection and the Gebauer-Moller pair
    pruning; every new basis element is fully tail-reduced.  Output
    polynomials are integer-primitive with positive leading coefficient
    under `order`, sorted by increasing leading monomial.  Raises
    ResourceBudgetError when the computation exceeds the step budget
    (default 10^7 elementary reduction steps, overridable by the
    FLATIMAGE_BUDGET environment variable or the `budget` argument).
    """
    if order is None:
        order = MonomialOrder("grevlex")
    bud = _resolve_budget(budget)
    key = order.key

    basis: list = []  # entries (lt, lc, terms)
    heap: list = []
    pairset: dict = {}  # (i, j) -> lcm, i < j, the live pairs

    def add_element(t: dict) -> None:
        lt = max(t, key=key)
        if t[lt] < 0:
            t = {m: -c for m, c in t.items()}
        tidx = len(basis)
        tau = lt
        basis.append((lt, t[lt], t))
        # prune surviving old pairs whose lcm the new lead strictly refines
        for ij in list(pairset):
            L = pairset[ij]
            if divides(tau, L):
                i, j = ij
                if mono_lcm(basis[i][0], tau) != L and \
                        mono_lcm(basis[j][0], tau) != L:
                    del pairset[ij]
        # candidate pairs with the new element
        cand = {i: mono_lcm(basis[i][0], tau) for i in range(tidx)}
        keep = []
        for i, Li in cand.items():
            ok = True
            for j, Lj in cand.items():
                if j != i and Lj != Li and divides(Lj, Li):
                    ok = False  # a strictly smaller lcm covers this pair
                    break
            if ok:
                keep.append(i)
        classes: dict = {}
        for i in keep:
            classes.setdefault(cand[i], []).append(i)
        for L, idxs in classes.items():
            # a coprime-lead member settles the whole equal-lcm class
            if any(_mul_mono(basis[i][0], tau) == L for i in idxs):
                continue
            i = min(idxs)
            pairset[(i, tidx)] = L
            heappush(heap, (key(L), i, tidx, L))

    for p in gens:
        t = _clear_content(_to_packed(p))
        if t:
            add_element(t)
    if not basis:
        return []

    while heap:
        _, i, j, L = heappop(heap)
        if pairset.get((i, j)) != L:
            continue  # pruned since it was queued
        del pairset[(i, j)]
        s = _spoly(basis[i], basis[j], bud)
        s = _reduce_lead(s, basis, order, bud)
        if not s:
            continue
        s = _normal_form(s, basis, order, bud)  # tail reduction
        add_element(s)

    return _interreduce(basis, order, bud)


def _interreduce(basis: list, order: MonomialOrder, budget: _Budget) -> list:
    key = order.key
    # prune: drop members whose leading term another member's divides
    alive = list(range(len(basis)))
    alive.sort(key=lambda i: key(basis[i][0]))
    kept: list = []
    for i in alive:
        lt = basis[i][0]
        if not any(divides(basis[j][0], lt) for j in kept):
            kept.append(i)
    reduced: list = []
    for pos, i in enumerate(kept):
        others = [basis[j] for j in kept if j != i]
        t = _normal_form(basis[i][2], others, order, budget)
        if not t:
            continue
        lt = max(t, key=key)
        if t[lt] < 0:
            t = {m: -c for m, c in t.items()}
        reduced.append((lt, t[lt], t))
    # a second pass against the fully reduced set settles mutual tails
    final: list = []
    for idx, (lt, lc, t) in enumerate(reduced):
        others = [reduced[j] for j in range(len(reduced)) if j != idx]
        t = _normal_form(t, others, order, budget)
        if not t:
            continue
        lt = max(t, key=key)
        if t[lt] < 0:
            t = {m: -c for m, c in t.items()}
        final.append((lt, t[lt], t))
    final.sort(key=lambda f: key(f[0]))
    return [_from_packed(t) for _, _, t in final]


def normal_form(p: MvPoly, basis_polys: Sequence[MvPoly],
                order: "MonomialOrder | None" = None,
                budget: "int | None" = None) -> MvPoly:
    """Fully reduced remainder of p modulo a (Groebner) basis.

    The remainder is integer-primitive, so it represents the normal
    form only up to a rational scalar; zero detection is exact either
    way, which is what ideal-membership tests need.
    """
    if order is None:
        order = MonomialOrder("grevlex")
    bud = _resolve_budget(budget)
    key = order.key
    basis = []
    for q in basis_polys:
        t = _clear_content(_to_packed(q))
        if t:
            lt = max(t, key=key)
            basis.append((lt, t[lt], t))
    t = _normal_form(_to_packed(p), basis, order, bud)
    return _from_packed(t)


def _monic(p: MvPoly, order: MonomialOrder) -> MvPoly:
    lead = max(p.terms, key=lambda e: order.key(pack(e)))
    return p / p.terms[lead]


def groebner(gens: "IdealGens | Iterable[MvPoly]",
             order: "MonomialOrder | None" = None,
             budget: "int | None" = None) -> IdealGens:
    """Reduced Groebner basis, monic-normalized, as an IdealGens.

    The generator list is deterministic: sorted by increasing leading
    monomial, each element with leading coefficient 1.  An ideal
    containing 1 yields the basis {1}.
    """
    if isinstance(gens, IdealGens):
        if order is None:
            order = gens.order
        gens = gens.generators
    elif order is None:
        order = MonomialOrder("grevlex")
    gb = groebner_basis(gens, order=order, budget=budget)
    return IdealGens([_monic(p, order) for p in gb], order=order)


def eliminate(gens: "IdealGens | Iterable[MvPoly]", drop: Iterable[str],
              budget: "int | None" = None) -> list:
    """Generators of the elimination ideal with `drop` variables removed.

    Computes a Groebner basis under a block elimination order and keeps
    the members free of the dropped variables; the result is itself a
    (monic, reduced) Groebner basis of the elimination ideal, empty
    when that ideal is zero.
    """
    if isinstance(gens, IdealGens):
        gens = gens.generators
    drop = list(drop)
    order = MonomialOrder.elimination(drop)
    gb = groebner_basis(gens, order=order, budget=budget)
    dropset = set(drop)
    return [_monic(p, order) for p in gb if not (set(p.variables) & dropset)]


def principal_generator(gens: "IdealGens | Sequence[MvPoly]") -> MvPoly:
    """Canonical single polynomial cutting out the same hypersurface.

    Takes the gcd of the generators, then its squarefree part, then the
    canonical form (integer-primitive, positive leading coefficient).
    For a principal ideal given by one generator this is exactly the
    reduced defining polynomial; with several generators the gcd is the
    smallest hypersurface containing the variety.  A generator set
    containing a nonzero constant collapses to 1 (empty locus).
    """
    from .algebra import canonicalize, mv_gcd, squarefree_part

    if isinstance(gens, IdealGens):
        gens = gens.generators
    polys = [p for p in gens if not p.is_zero()]
    if not polys:
        raise ValueError("principal_generator needs at least one nonzero generator")
    g = polys[0]
    for p in polys[1:]:
        if g.is_constant():
            break
        g = mv_gcd(g, p)
    if g.is_constant():
        return MvPoly.constant(1)
    return canonicalize(squarefree_part(g))
