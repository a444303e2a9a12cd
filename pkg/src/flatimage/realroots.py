"""Exact real algebraic numbers: Sturm isolation, refinement,
comparison and strip location.

A real root is represented by a squarefree integer-primitive defining
polynomial together with an isolating interval.  Rational roots are
always detected and stored exactly (degree-one defining polynomial,
collapsed interval); as a consequence the defining polynomial of an
irrational root never has rational roots at all, which keeps dyadic
bisection endpoints safe and makes comparison against a rational a
single sign evaluation.  Values are immutable; refinement returns a
new value for the same root with a narrower interval.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .algebra import (
    chain_variations_at,
    idivexact,
    igcd_poly,
    iprim,
    isign_at,
    isquarefree,
    sturm_chain,
)
from .mvpoly import UvPoly


class Coincident(NamedTuple):
    """Marker returned when a query value equals a critical value
    exactly; `index` is the 1-based position of the matched value."""

    index: int


def _sign_at(coeffs: tuple, q: Fraction) -> int:
    return isign_at(list(coeffs), q.numerator, q.denominator)


def _bisect_step(coeffs: tuple, lo: Fraction, hi: Fraction) -> tuple:
    """One bisection step for a sign-changing interval of a polynomial
    with no rational roots (the midpoint can never be a root)."""
    mid = (lo + hi) / 2
    if _sign_at(coeffs, mid) == _sign_at(coeffs, lo):
        return mid, hi
    return lo, mid


@dataclass(frozen=True, eq=False)
class RealAlgebraic:
    """A real algebraic number: the unique root of `defining` in [lo, hi].

    `defining` is an ascending, squarefree, integer-primitive
    coefficient tuple with positive leading coefficient.  For a
    rational value the interval is collapsed (lo == hi == value) and
    defining is linear; otherwise the root lies strictly inside the
    interval, the endpoints are not roots, and defining has no rational
    roots at all.
    """

    defining: tuple
    lo: Fraction
    hi: Fraction

    @classmethod
    def from_rational(cls, value) -> "RealAlgebraic":
        value = Fraction(value)
        return cls(defining=(-value.numerator, value.denominator),
                   lo=value, hi=value)

    @property
    def interval(self) -> tuple:
        return (self.lo, self.hi)

    def is_rational(self) -> bool:
        return self.lo == self.hi

    def value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not stored as an exact rational")
        return self.lo

    def defining_poly(self) -> UvPoly:
        return UvPoly("t", [Fraction(c) for c in self.defining])

    def refine(self, width) -> "RealAlgebraic":
        """The same root with isolating interval narrower than `width`."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        if self.is_rational():
            return self
        lo, hi = self.lo, self.hi
        while hi - lo >= width:
            lo, hi = _bisect_step(self.defining, lo, hi)
        return RealAlgebraic(defining=self.defining, lo=lo, hi=hi)

    def approx(self, eps=Fraction(1, 2 ** 53)) -> Fraction:
        if self.is_rational():
            return self.lo
        r = self.refine(eps)
        return (r.lo + r.hi) / 2

    def __float__(self) -> float:
        return float(self.approx())

    def __eq__(self, other) -> bool:
        if isinstance(other, RealAlgebraic):
            return compare(self, other) == 0
        if isinstance(other, (int, Fraction)):
            return compare_to_rational(self, Fraction(other)) == 0
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_rational():
            return f"RealAlgebraic({self.lo})"
        return (f"RealAlgebraic(defining={list(self.defining)}, "
                f"in ({self.lo}, {self.hi}))")


def compare_to_rational(a: RealAlgebraic, q) -> int:
    """Sign of (a - q) for rational q: -1, 0 or +1."""
    q = Fraction(q)
    if a.is_rational():
        v = a.lo
        return (v > q) - (v < q)
    if q <= a.lo:
        return 1
    if q >= a.hi:
        return -1
    # defining has no rational roots, so the sign at q is never 0;
    # matching the sign at lo puts the root above q
    return 1 if _sign_at(a.defining, q) == _sign_at(a.defining, a.lo) else -1


def compare(a: RealAlgebraic, b) -> int:
    """Exact three-way comparison; b may be RealAlgebraic or rational."""
    if not isinstance(b, RealAlgebraic):
        return compare_to_rational(a, Fraction(b))
    if a.is_rational():
        if b.is_rational():
            return (a.lo > b.lo) - (a.lo < b.lo)
        return -compare_to_rational(b, a.lo)
    if b.is_rational():
        return compare_to_rational(a, b.lo)
    if a.defining == b.defining and a.lo == b.lo and a.hi == b.hi:
        return 0
    g = igcd_poly(list(a.defining), list(b.defining))
    gchain = sturm_chain(g) if len(g) > 1 else None
    alo, ahi = a.lo, a.hi
    blo, bhi = b.lo, b.hi
    while True:
        if ahi <= blo:
            return -1
        if bhi <= alo:
            return 1
        if gchain is not None:
            klo = max(alo, blo)
            khi = min(ahi, bhi)
            if klo < khi:
                # g divides both defining polynomials, hence has no
                # rational roots either; endpoints are safe
                va = chain_variations_at(gchain, klo.numerator, klo.denominator)
                vb = chain_variations_at(gchain, khi.numerator, khi.denominator)
                if va - vb >= 1:
                    return 0
        alo, ahi = _bisect_step(a.defining, alo, ahi)
        blo, bhi = _bisect_step(b.defining, blo, bhi)


@functools.total_ordering
class _CmpWrap:
    """Sort key adapter over exact comparison."""

    __slots__ = ("root",)

    def __init__(self, root):
        self.root = root

    def __eq__(self, other):
        return compare(self.root, other.root) == 0

    def __lt__(self, other):
        return compare(self.root, other.root) < 0


# ---------------------------------------------------------------------------
# rational root extraction


_TRIAL_LIMIT = 10 ** 6
_DIVISOR_CAP = 50000


def _factorize_small(n: int) -> "dict | None":
    """Trial-division factorization; None when a cofactor above the
    trial bound squared survives (the divisor set would be incomplete)."""
    n = abs(n)
    out: dict = {}
    d = 2
    while d * d <= n and d <= _TRIAL_LIMIT:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n > _TRIAL_LIMIT * _TRIAL_LIMIT:
            return None
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(factors: dict) -> list:
    out = [1]
    for p, e in factors.items():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return out


def _rational_roots(coeffs: list) -> "list | None":
    """All rational roots of a primitive integer polynomial with
    nonzero constant term, by the rational root test.  Returns None
    when the end coefficients are too expensive to factor; callers then
    fall back to interval-based detection."""
    f0 = _factorize_small(coeffs[0])
    f1 = _factorize_small(coeffs[-1])
    if f0 is None or f1 is None:
        return None
    nums = _divisors(f0)
    dens = _divisors(f1)
    if len(nums) * len(dens) > _DIVISOR_CAP:
        return None
    roots = []
    for p in nums:
        for q in dens:
            for num in (p, -p):
                r = Fraction(num, q)
                if r.numerator != num or r.denominator != q:
                    continue  # not in lowest terms; already covered
                if isign_at(coeffs, num, q) == 0:
                    roots.append(r)
    return sorted(set(roots))


def _simplest_between(a: Fraction, b: Fraction) -> Fraction:
    """The rational with smallest denominator strictly between a and b
    (a < b), by the continued-fraction walk."""
    if a < 0 and b > 0:
        return Fraction(0)
    if b <= 0:
        return -_simplest_between(-b, -a)
    # now 0 <= a < b
    fa = a.numerator // a.denominator
    if Fraction(fa + 1) < b:
        return Fraction(fa + 1)
    frac_a = a - fa
    if frac_a == 0:
        # (fa, b) holds no integer: answer is fa + 1/k for minimal k
        inner = 1 / (b - a)
        k = inner.numerator // inner.denominator + 1
        return fa + Fraction(1, k)
    return fa + 1 / _simplest_between(1 / (b - fa), 1 / frac_a)


# ---------------------------------------------------------------------------
# isolation


def _cauchy_bound(coeffs: list) -> Fraction:
    """A power of two strictly above the magnitude of every root."""
    lc = abs(coeffs[-1])
    m = max(abs(c) for c in coeffs[:-1]) if len(coeffs) > 1 else 0
    bound = 1 + Fraction(m, lc)
    power = Fraction(2)
    while power < bound:
        power *= 2
    return power


def _deflate(coeffs: list, root: Fraction) -> list:
    return idivexact(coeffs, [-root.numerator, root.denominator])


_FALLBACK_WIDTH = Fraction(1, 2 ** 80)


def isolate_roots(f) -> list:
    """Isolate all distinct real roots of a univariate polynomial.

    Accepts a UvPoly or an ascending coefficient sequence.  Returns the
    sorted list of RealAlgebraic values; rational roots come out exact,
    and isolating intervals of distinct roots never share an interior
    point.
    """
    if isinstance(f, UvPoly):
        coeffs = f.int_coeffs()
    else:
        coeffs = UvPoly("t", [Fraction(c) for c in f]).int_coeffs()
    if not coeffs:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if len(coeffs) == 1:
        return []
    sf = isquarefree(coeffs)
    if sf[-1] < 0:
        sf = [-c for c in sf]
    rational: list = []
    if sf[0] == 0:  # squarefree, so at most one factor of the variable
        rational.append(Fraction(0))
        sf = iprim(sf[1:])
    deferred = False
    if len(sf) > 1:
        found = _rational_roots(sf)
        if found is None:
            deferred = True
        else:
            for r in found:
                rational.append(r)
                sf = _deflate(sf, r)
    if len(sf) > 1 and sf[-1] < 0:
        sf = [-c for c in sf]
    roots = [RealAlgebraic.from_rational(r) for r in rational]
    intervals: list = []
    while len(sf) > 1:
        # bisection over Sturm variation counts; a restart happens only
        # in deferred mode, when a midpoint lands exactly on a rational
        # root that factoring was too expensive to find upfront
        hit = None
        chain = sturm_chain(sf)
        bound = _cauchy_bound(sf)
        stack = [(-bound, bound)]
        intervals = []
        while stack:
            lo, hi = stack.pop()
            n = (chain_variations_at(chain, lo.numerator, lo.denominator)
                 - chain_variations_at(chain, hi.numerator, hi.denominator))
            if n == 0:
                continue
            if n == 1:
                intervals.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            if isign_at(sf, mid.numerator, mid.denominator) == 0:
                hit = mid
                break
            stack.append((lo, mid))
            stack.append((mid, hi))
        if hit is None:
            break
        rational.append(hit)
        roots.append(RealAlgebraic.from_rational(hit))
        sf = _deflate(sf, hit)
        if len(sf) > 1 and sf[-1] < 0:
            sf = [-c for c in sf]
        intervals = []
    if deferred and intervals:
        # big-coefficient fallback: refine each interval very tightly;
        # a rational root with denominator up to ~2^39 is then the
        # unique simplest rational inside and gets verified exactly
        kept = []
        for lo, hi in intervals:
            slo = isign_at(sf, lo.numerator, lo.denominator)
            found_r = None
            while hi - lo >= _FALLBACK_WIDTH:
                mid = (lo + hi) / 2
                smid = isign_at(sf, mid.numerator, mid.denominator)
                if smid == 0:
                    found_r = mid
                    break
                if smid == slo:
                    lo = mid
                else:
                    hi = mid
            if found_r is None:
                cand = _simplest_between(lo, hi)
                if isign_at(sf, cand.numerator, cand.denominator) == 0:
                    found_r = cand
            if found_r is None:
                kept.append((lo, hi))
            else:
                rational.append(found_r)
                roots.append(RealAlgebraic.from_rational(found_r))
        for r in rational:
            if r != 0 and len(sf) > 1:
                if isign_at(sf, r.numerator, r.denominator) == 0:
                    sf = _deflate(sf, r)
        if len(sf) > 1 and sf[-1] < 0:
            sf = [-c for c in sf]
        intervals = kept
    sft = tuple(sf)
    for lo, hi in intervals:
        # shrink so the interval avoids every exact rational root,
        # keeping all isolating intervals pairwise disjoint
        for r in rational:
            while lo < r < hi:
                lo, hi = _bisect_step(sft, lo, hi)
        roots.append(RealAlgebraic(defining=sft, lo=lo, hi=hi))
    roots.sort(key=_CmpWrap)
    return roots


def refine(root: RealAlgebraic, width) -> RealAlgebraic:
    """Module-level refinement helper; returns a narrowed copy."""
    return root.refine(width)


# ---------------------------------------------------------------------------
# critical value lists and strip location


@dataclass(frozen=True)
class CriticalList:
    """Strictly increasing critical values with their source tags."""

    values: tuple
    sources: tuple  # parallel tuple of frozenset[str]

    @classmethod
    def from_tagged_roots(cls, tagged: Iterable) -> "CriticalList":
        items = sorted(tagged, key=lambda it: _CmpWrap(it[0]))
        values: list = []
        sources: list = []
        for root, tag in items:
            if values and compare(values[-1], root) == 0:
                sources[-1] = sources[-1] | {tag}
            else:
                values.append(root)
                sources.append(frozenset({tag}))
        return cls(values=tuple(values), sources=tuple(sources))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i) -> RealAlgebraic:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)


def locate_strip(criticals, x) -> "int | Coincident":
    """Locate a rational x against a sorted list of critical values.

    Returns the strip index k meaning C[k] < x < C[k+1] in 1-based
    numbering (k = 0 below all values, k = len(C) above all), or a
    Coincident marker carrying the 1-based index of the matched value.
    """
    values = criticals.values if isinstance(criticals, CriticalList) else criticals
    x = Fraction(x)
    lo, hi = 0, len(values)
    while lo < hi:
        mid = (lo + hi) // 2
        c = compare_to_rational(values[mid], x)
        if c == 0:
            return Coincident(mid + 1)
        if c < 0:  # critical value below x
            lo = mid + 1
        else:
            hi = mid
    return lo
