"""Exact polynomial algebra: contents, gcds, squarefree parts,
resultants and Sturm sequences.

Multivariate gcds run a primitive polynomial-remainder sequence,
treating the input as univariate in the last occurring variable over
the integer polynomial ring in the remaining ones.  Resultants use the
classical Sylvester determinant (fraction-free Gaussian elimination)
when the eliminated degree is at most 8 and the subresultant PRS above
that; the two routes agree exactly and the test suite checks them
against each other.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from math import lcm as ilcm

from .geometry import Polygon2D
from .mvpoly import VAR_INDEX, VARS, MvPoly, UvPoly, print_key

# ---------------------------------------------------------------------------
# canonical scaling


def integer_primitive(p: MvPoly) -> MvPoly:
    """Rescale by a positive rational so the coefficients become coprime
    integers.  The zero polynomial stays zero; the sign is preserved."""
    if not p.terms:
        return MvPoly()
    den = 1
    for c in p.terms.values():
        den = ilcm(den, c.denominator)
    num = 0
    for c in p.terms.values():
        num = igcd(num, c.numerator * (den // c.denominator))
    scale = Fraction(den, num)
    return MvPoly({e: c * scale for e, c in p.terms.items()})


def leading_coefficient(p: MvPoly) -> Fraction:
    """Coefficient of the graded-lex (x > y > u > v > w > t) leading term."""
    if not p.terms:
        return Fraction(0)
    exp = max(p.terms, key=print_key)
    return p.terms[exp]


def canonicalize(p: MvPoly) -> MvPoly:
    """Canonical representative of the scalar class of p: coefficients
    coprime integers, leading coefficient (graded-lex, x > y) positive.
    Raises on the zero polynomial, which has no such representative."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no canonical form")
    q = integer_primitive(p)
    if leading_coefficient(q) < 0:
        q = -q
    return q


def divexact(a: MvPoly, b: MvPoly) -> MvPoly:
    """Exact multivariate division; raises ValueError if b does not
    divide a."""
    if b.is_zero():
        raise ZeroDivisionError("exact division by zero polynomial")
    if a.is_zero():
        return MvPoly()
    if b.is_constant():
        return a * (Fraction(1) / b.constant_value())
    bexp = max(b.terms, key=print_key)
    bc = b.terms[bexp]
    rest = dict(a.terms)
    out: dict = {}
    while rest:
        aexp = max(rest, key=print_key)
        qexp = tuple(x - y for x, y in zip(aexp, bexp))
        if any(e < 0 for e in qexp):
            raise ValueError("inexact polynomial division")
        qc = rest[aexp] / bc
        out[qexp] = qc
        for exp, c in b.terms.items():
            key = tuple(x + y for x, y in zip(qexp, exp))
            s = rest.get(key, Fraction(0)) - qc * c
            if s:
                rest[key] = s
            else:
                rest.pop(key, None)
    return MvPoly(out)


# ---------------------------------------------------------------------------
# multivariate gcd (primitive PRS)


def _main_variable(a: MvPoly, b: MvPoly) -> str | None:
    idx = -1
    for p in (a, b):
        for exp in p.terms:
            for i in range(len(VARS) - 1, idx, -1):
                if exp[i]:
                    idx = max(idx, i)
                    break
    return VARS[idx] if idx >= 0 else None


def _int_content(p: MvPoly) -> int:
    g = 0
    for c in p.terms.values():
        g = igcd(g, c.numerator)
        if g == 1:
            break
    return g or 1


def _content_list(coeffs: list) -> MvPoly:
    """gcd (over the integer polynomial ring) of a list of
    integer-coefficient polynomials."""
    g = MvPoly()
    for c in coeffs:
        g = _gcd_zz(g, c)
        if g.is_constant() and g.constant_value() == 1:
            break
    return g


def _prem_list(a: list, b: list) -> list:
    """Pseudo-remainder of dense coefficient lists with MvPoly entries:
    lc(b)^(deg a - deg b + 1) * a  mod  b."""
    m, n = len(a) - 1, len(b) - 1
    if m < n:
        return a[:]
    d = b[-1]
    e = m - n + 1
    r = a[:]
    while r and len(r) - 1 >= n:
        lc = r[-1]
        r = [c * d for c in r[:-1]]
        off = len(r) - n
        for i in range(n):
            r[off + i] = r[off + i] - lc * b[i]
        while r and r[-1].is_zero():
            r.pop()
        e -= 1
    if e:
        f = d ** e
        r = [c * f for c in r]
    return r


def _gcd_zz(a: MvPoly, b: MvPoly) -> MvPoly:
    """gcd in ZZ[u..t] of integer-coefficient polynomials, including the
    integer content; normalized to a positive leading coefficient."""
    if a.is_zero():
        return canonicalize(b) * _int_content(b) if b.terms else MvPoly()
    if b.is_zero():
        return canonicalize(a) * _int_content(a)
    if a.is_constant() or b.is_constant():
        # a constant divides a polynomial iff it divides its content
        return MvPoly.constant(igcd(_int_content(a), _int_content(b)))
    var = _main_variable(a, b)
    da, db = a.degree_in(var), b.degree_in(var)
    if da == 0 or db == 0:
        # one input is free of the main variable: it can only share its
        # content with the other's coefficients
        free, full = (a, b) if da == 0 else (b, a)
        return _content_list([free] + full.coefficients_in(var))
    A = a.coefficients_in(var)
    B = b.coefficients_in(var)
    if len(A) < len(B):
        A, B = B, A
    ca = _content_list(A)
    cb = _content_list(B)
    cont = _gcd_zz(ca, cb)
    A = [divexact(c, ca) for c in A]
    B = [divexact(c, cb) for c in B]
    # subresultant remainder sequence: each pseudo-remainder has a known
    # exact divisor, so coefficients stay polynomially sized without
    # recursive content computations along the way
    gg = MvPoly.constant(1)
    hh = MvPoly.constant(1)
    prim = None
    while True:
        delta = len(A) - len(B)
        r = _prem_list(A, B)
        if not r:
            prim = B
            break
        if len(r) == 1:  # nonzero, degree 0 in the main variable
            break        # primitive parts are coprime
        divisor = gg * hh ** delta
        A, B = B, [divexact(c, divisor) for c in r]
        gg = A[-1]
        if delta == 1:
            hh = gg
        elif delta > 1:
            hh = divexact(gg ** delta, hh ** (delta - 1))
    if prim is None:
        return cont
    g = MvPoly.from_coefficients_in(var, prim)
    g = divexact(g, _content_list(prim))
    if leading_coefficient(g) < 0:
        g = -g
    return cont * g


def mv_gcd(a: MvPoly, b: MvPoly) -> MvPoly:
    """gcd of two rational-coefficient polynomials, canonicalized
    (integer-primitive, positive leading coefficient)."""
    g = _gcd_zz(integer_primitive(a), integer_primitive(b))
    return canonicalize(g)


_SQFREE_PRIME = 2147483629


def _gcd_degree_mod_p(a: list, b: list, p: int) -> int:
    """Degree of gcd of two coefficient lists over F_p (-1 for gcd zero)."""
    a = [c % p for c in a]
    b = [c % p for c in b]
    while b and not b[-1]:
        b.pop()
    while a and not a[-1]:
        a.pop()
    while b:
        # a mod b
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            lead = a[-1] * inv % p
            off = len(a) - len(b)
            if lead:
                for i in range(len(b)):
                    a[off + i] = (a[off + i] - lead * b[i]) % p
            a.pop()
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return len(a) - 1


def _certified_squarefree(prim: MvPoly, var: str, other: "str | None") -> bool:
    """True proves gcd(prim, d prim / d var) is constant.  Works by
    specializing the second variable at small points and testing
    coprimality with the derivative modulo a fixed prime: a nonzero
    specialized resultant rules out a repeated factor exactly.  False
    only means the cheap route was inconclusive."""
    P = _SQFREE_PRIME
    coeffs = prim.coefficients_in(var)
    for y0 in (2, 3, 5, 7, 11):
        cs = []
        for c in coeffs:
            v = c.evaluate({other: Fraction(y0)}) if other else c.constant_value()
            cs.append(int(v) % P)
        if not cs[-1]:
            continue  # leading coefficient vanished, point unusable
        deriv = [i * c % P for i, c in enumerate(cs)][1:]
        if _gcd_degree_mod_p(cs, deriv, P) == 0:
            return True
    return False


def squarefree_part(p: MvPoly) -> MvPoly:
    """Product of the distinct irreducible factors of p, canonicalized.
    Supports polynomials in at most two variables."""
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    names = p.variables
    if len(names) > 2:
        raise ValueError("squarefree_part supports at most two variables")
    if not names:
        return MvPoly.constant(1)
    p = integer_primitive(p)
    var = names[-1]
    if len(names) == 1:
        if _certified_squarefree(p, var, None):
            return canonicalize(p)
        g = mv_gcd(p, p.diff(var))
        return canonicalize(divexact(p, g))
    coeffs = p.coefficients_in(var)
    cont = _content_list(coeffs)
    prim = divexact(p, cont)
    if _certified_squarefree(prim, var, names[0]):
        sf_prim = prim
    else:
        sf_prim = divexact(prim, mv_gcd(prim, prim.diff(var)))
    if cont.is_constant():
        return canonicalize(sf_prim)
    return canonicalize(squarefree_part(cont) * sf_prim)


# ---------------------------------------------------------------------------
# resultants


def _sylvester_matrix(A: list, B: list) -> list:
    m, n = len(A) - 1, len(B) - 1
    size = m + n
    rows = []
    desc_a = list(reversed(A))
    desc_b = list(reversed(B))
    for r in range(n):
        row = [MvPoly()] * size
        for j, c in enumerate(desc_a):
            row[r + j] = c
        rows.append(row)
    for r in range(m):
        row = [MvPoly()] * size
        for j, c in enumerate(desc_b):
            row[r + j] = c
        rows.append(row)
    return rows


def _bareiss_det(rows: list) -> MvPoly:
    """Fraction-free determinant of a matrix of polynomials."""
    n = len(rows)
    if n == 0:
        return MvPoly.constant(1)
    m = [row[:] for row in rows]
    sign = 1
    prev = MvPoly.constant(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MvPoly()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = divexact(num, prev)
            m[i][k] = MvPoly()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def _resultant_prs(A: list, B: list) -> MvPoly:
    """Exact resultant of primitive integer-coefficient lists via the
    subresultant polynomial remainder sequence."""
    s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 == 1 and (len(B) - 1) % 2 == 1:
            s = -s
    g = MvPoly.constant(1)
    h = MvPoly.constant(1)
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        R = _prem_list(A, B)
        if not R:
            return MvPoly()  # positive-degree common factor
        divisor = g * h ** delta
        A, B = B, [divexact(c, divisor) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = divexact(g ** delta, h ** (delta - 1))
        if len(B) - 1 == 0:
            break
    d = len(A) - 1
    if d == 1:
        res = B[0]
    else:
        res = divexact(B[0] ** d, h ** (d - 1))
    return res * s


def resultant(a: MvPoly, b: MvPoly, var: str) -> MvPoly:
    """Resultant of a and b with respect to `var`, exact.

    Uses the Sylvester determinant for eliminated degree at most 8 and
    the subresultant PRS beyond.  Raises ValueError when both inputs are
    constant in `var` (no elimination to perform)."""
    if var not in VAR_INDEX:
        raise ValueError(f"unknown variable {var!r}")
    if a.is_zero() or b.is_zero():
        return MvPoly()
    da, db = a.degree_in(var), b.degree_in(var)
    if da == 0 and db == 0:
        raise ValueError(f"both inputs are constant in {var!r}")
    if da == 0:
        return a ** db
    if db == 0:
        return b ** da
    A = a.coefficients_in(var)
    B = b.coefficients_in(var)
    if max(da, db) <= 8:
        return _bareiss_det(_sylvester_matrix(A, B))
    # clear to integer coefficients; Res(c*A, B) = c^degB * Res(A, B)
    ia = integer_primitive(a)
    exp0 = max(a.terms, key=print_key)
    scale_a = ia.terms[exp0] / a.terms[exp0]
    ib = integer_primitive(b)
    exp0 = max(b.terms, key=print_key)
    scale_b = ib.terms[exp0] / b.terms[exp0]
    correction = scale_a ** db * scale_b ** da
    A = ia.coefficients_in(var)
    B = ib.coefficients_in(var)
    ca = _content_list(A)
    cb = _content_list(B)
    A = [divexact(c, ca) for c in A]
    B = [divexact(c, cb) for c in B]
    t = ca ** db * cb ** da
    res = _resultant_prs(A, B)
    if res.is_zero():
        return MvPoly()
    return res * t * (Fraction(1) / correction)


# ---------------------------------------------------------------------------
# integer univariate toolkit (Sturm sequences live on primitive integer
# coefficient lists, ascending order, no trailing zeros)


def iprim(c: list) -> list:
    g = 0
    for x in c:
        g = igcd(g, x)
        if g == 1:
            return list(c)
    return [x // g for x in c] if g else []


def ideriv(c: list) -> list:
    return [i * x for i, x in enumerate(c)][1:]


def iprem_signed(a: list, b: list) -> list:
    """Pseudo-remainder equal to a *positive* multiple of the true
    remainder of a by b (sign-corrected multiplier); for Sturm chains."""
    m, n = len(a) - 1, len(b) - 1
    if m < n:
        return list(a)
    d = b[-1]
    e = m - n + 1
    r = list(a)
    while r and len(r) - 1 >= n:
        lc = r[-1]
        r = [c * d for c in r[:-1]]
        off = len(r) - n
        for i in range(n):
            r[off + i] -= lc * b[i]
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e:
        f = d ** e
        r = [c * f for c in r]
    if d < 0 and (m - n + 1) % 2 == 1:
        r = [-c for c in r]
    return r


def igcd_poly(a: list, b: list) -> list:
    """Primitive-PRS gcd of integer coefficient lists, positive leading
    coefficient."""
    a, b = iprim(a), iprim(b)
    while b:
        r = iprem_signed(a, b)
        a, b = b, iprim(r)
    if a and a[-1] < 0:
        a = [-c for c in a]
    return a


def ipoly_div(a: list, b: list) -> tuple:
    """Division with remainder over the rationals; returns (q, r) as
    Fraction lists."""
    if not b:
        raise ZeroDivisionError
    r = [Fraction(c) for c in a]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    d = Fraction(b[-1])
    n = len(b) - 1
    while r and len(r) - 1 >= n:
        c = r[-1] / d
        q[len(r) - 1 - n] = c
        for i in range(n + 1):
            r[len(r) - 1 - n + i] -= c * b[i]
        while r and not r[-1]:
            r.pop()
    return q, r


def idivexact(a: list, b: list) -> list:
    q, r = ipoly_div(a, b)
    if r or any(c.denominator != 1 for c in q):
        raise ValueError("inexact integer polynomial division")
    return [c.numerator for c in q]


def isquarefree(c: list) -> list:
    """Squarefree part of an integer coefficient list (primitive,
    same-sign leading coefficient)."""
    c = iprim(c)
    if len(c) <= 2:
        return c
    g = igcd_poly(c, ideriv(c))
    if len(g) == 1:
        return c
    return idivexact(c, g)


def sturm_chain(c: list) -> list:
    """Sturm chain of a squarefree primitive integer coefficient list."""
    chain = [list(c)]
    d = ideriv(c)
    if d:
        chain.append(iprim(d))
    while len(chain[-1]) > 1:
        r = iprem_signed(chain[-2], chain[-1])
        if not r:
            break
        chain.append(iprim([-x for x in r]))
    return chain


def isign_at(c: list, num: int, den: int) -> int:
    """Sign of the polynomial at num/den (den > 0)."""
    if not c:
        return 0
    acc = c[-1]
    dp = 1
    for coef in reversed(c[:-1]):
        dp *= den
        acc = acc * num + coef * dp
    return (acc > 0) - (acc < 0)


def isign_at_inf(c: list, positive: bool) -> int:
    if not c:
        return 0
    lc = c[-1]
    if positive or (len(c) - 1) % 2 == 0:
        return (lc > 0) - (lc < 0)
    return (lc < 0) - (lc > 0)


def variations(signs: list) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def chain_variations_at(chain: list, num: int, den: int) -> int:
    return variations([isign_at(c, num, den) for c in chain])


def chain_variations_at_inf(chain: list, positive: bool) -> int:
    return variations([isign_at_inf(c, positive) for c in chain])


def sturm_count(f: UvPoly, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of f in the open interval (a, b).
    Requires a < b and f nonzero at both endpoints."""
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("empty interval")
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f(a) == 0 or f(b) == 0:
        raise ValueError("interval endpoint is a root")
    c = isquarefree(f.int_coeffs())
    chain = sturm_chain(c)
    va = chain_variations_at(chain, a.numerator, a.denominator)
    vb = chain_variations_at(chain, b.numerator, b.denominator)
    return va - vb


# ---------------------------------------------------------------------------
# Newton polygons


def newton_polygon(p: MvPoly) -> Polygon2D:
    """Convex hull of the exponent vectors of a polynomial in at most
    two variables.  The exponent axes follow the canonical variable
    order of the two variables involved (x before y); polynomials that
    happen to use fewer variables are handled with zero exponents on the
    missing axis."""
    if p.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    names = p.variables
    if len(names) > 2:
        raise ValueError("newton_polygon supports at most two variables")
    if names and set(names) <= {"x", "y"}:
        first, second = "x", "y"
    elif len(names) == 2:
        first, second = names
    elif len(names) == 1:
        first, second = names[0], "y" if names[0] != "y" else "x"
    else:
        first, second = "x", "y"
    i, j = VAR_INDEX[first], VAR_INDEX[second]
    return Polygon2D([(exp[i], exp[j]) for exp in p.terms])
