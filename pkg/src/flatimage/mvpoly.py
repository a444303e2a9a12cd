"""Sparse exact polynomial arithmetic over the rationals.

Polynomials live in a fixed six-variable universe u, v, w, x, y, t with
the canonical order u < v < w < x < y < t.  Coefficients are
`fractions.Fraction` values (always lowest terms, positive denominator),
terms are stored sparsely as a map from length-6 exponent tuples to
nonzero coefficients.  Instances are treated as immutable: every
operation builds a fresh term map and nothing here mutates its inputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

VARS = ("u", "v", "w", "x", "y", "t")
NVARS = len(VARS)
VAR_INDEX = {name: i for i, name in enumerate(VARS)}

# Precedence used for display and for the canonical sign convention:
# graded-lex with x > y > u > v > w > t.
PRINT_ORDER = ("x", "y", "u", "v", "w", "t")
_PRINT_IDX = tuple(VAR_INDEX[name] for name in PRINT_ORDER)

_ZERO_EXP = (0,) * NVARS

Scalar = Union[int, Fraction]


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an integer or Fraction, got {type(value).__name__}")


def print_key(exp: tuple) -> tuple:
    """Sort key realizing graded-lex with precedence x > y > u > v > w > t."""
    return (sum(exp),) + tuple(exp[i] for i in _PRINT_IDX)


class MvPoly:
    """A multivariate polynomial with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Fraction] | None = None):
        self.terms: dict = dict(terms) if terms else {}

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "MvPoly":
        return cls()

    @classmethod
    def constant(cls, value: Scalar) -> "MvPoly":
        c = _as_fraction(value)
        return cls({_ZERO_EXP: c}) if c else cls()

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MvPoly":
        if name not in VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}")
        if power < 0:
            raise ValueError("negative exponent")
        if power == 0:
            return cls.constant(1)
        exp = [0] * NVARS
        exp[VAR_INDEX[name]] = power
        return cls({tuple(exp): Fraction(1)})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple]) -> "MvPoly":
        """Build from (coefficient, {var: exponent}) pairs."""
        acc: dict = {}
        for coef, powers in terms:
            c = _as_fraction(coef)
            exp = [0] * NVARS
            for name, e in powers.items():
                exp[VAR_INDEX[name]] = e
            key = tuple(exp)
            c = acc.get(key, Fraction(0)) + c
            if c:
                acc[key] = c
            else:
                acc.pop(key, None)
        return cls(acc)

    # ----- structure ----------------------------------------------------

    @property
    def variables(self) -> tuple:
        """Ordered tuple (canonical order) of variables that occur."""
        seen = [False] * NVARS
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    seen[i] = True
        return tuple(VARS[i] for i in range(NVARS) if seen[i])

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXP in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if self.is_constant():
            return self.terms[_ZERO_EXP]
        raise ValueError("polynomial is not constant")

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, name: str) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        i = VAR_INDEX[name]
        return max(exp[i] for exp in self.terms)

    def term_count(self) -> int:
        return len(self.terms)

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        exp = [0] * NVARS
        for name, e in powers.items():
            exp[VAR_INDEX[name]] = e
        return self.terms.get(tuple(exp), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MvPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MvPoly.constant(other).terms
        return NotImplemented

    __hash__ = None  # mutable dict inside; not usable as a dict key

    # ----- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "MvPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        for exp, c in other.terms.items():
            s = acc.get(exp, Fraction(0)) + c
            if s:
                acc[exp] = s
            else:
                acc.pop(exp, None)
        return MvPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> "MvPoly":
        return MvPoly({exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "MvPoly":
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return MvPoly()
            return MvPoly({exp: c * v for exp, v in self.terms.items()})
        if not isinstance(other, MvPoly):
            return NotImplemented
        acc: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = acc.get(exp, Fraction(0)) + c1 * c2
                if s:
                    acc[exp] = s
                else:
                    acc.pop(exp, None)
        return MvPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MvPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MvPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (Fraction(1) / c)
        return NotImplemented

    # ----- calculus and substitution -------------------------------------

    def diff(self, name: str) -> "MvPoly":
        """Partial derivative with respect to one variable."""
        i = VAR_INDEX[name]
        acc: dict = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e:
                nexp = exp[:i] + (e - 1,) + exp[i + 1:]
                s = acc.get(nexp, Fraction(0)) + c * e
                if s:
                    acc[nexp] = s
                else:
                    acc.pop(nexp, None)
        return MvPoly(acc)

    def substitute(self, name: str, value) -> "MvPoly":
        """Substitute a rational or polynomial value for one variable.

        The result no longer involves `name` (unless the substituted
        polynomial itself does).
        """
        i = VAR_INDEX[name]
        if isinstance(value, (int, Fraction)):
            value = MvPoly.constant(value)
        if not isinstance(value, MvPoly):
            raise TypeError("substitute expects a scalar or MvPoly")
        # Group terms by the exponent of the substituted variable, then
        # combine with a Horner pass so value**e is never formed directly.
        by_exp: dict = {}
        for exp, c in self.terms.items():
            e = exp[i]
            rest = exp[:i] + (0,) + exp[i + 1:]
            level = by_exp.setdefault(e, {})
            s = level.get(rest, Fraction(0)) + c
            if s:
                level[rest] = s
            else:
                level.pop(rest, None)
        if not by_exp:
            return MvPoly()
        top = max(by_exp)
        result = MvPoly()
        for e in range(top, -1, -1):
            result = result * value
            if e in by_exp:
                result = result + MvPoly(by_exp[e])
        return result

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Exact evaluation; every occurring variable must be assigned."""
        values = {}
        for name in self.variables:
            if name not in assignment:
                raise ValueError(f"no value for variable {name!r}")
            values[VAR_INDEX[name]] = _as_fraction(assignment[name])
        total = Fraction(0)
        powers: dict = {}
        for exp, c in self.terms.items():
            prod = c
            for i, e in enumerate(exp):
                if e:
                    key = (i, e)
                    pw = powers.get(key)
                    if pw is None:
                        pw = values[i] ** e
                        powers[key] = pw
                    prod *= pw
            total += prod
        return total

    # ----- univariate views ----------------------------------------------

    def coefficients_in(self, name: str) -> list:
        """Dense coefficient list in `name` (index = exponent), entries
        are MvPoly values free of `name`.  Empty list for zero."""
        if not self.terms:
            return []
        i = VAR_INDEX[name]
        deg = max(exp[i] for exp in self.terms)
        coeffs = [dict() for _ in range(deg + 1)]
        for exp, c in self.terms.items():
            rest = exp[:i] + (0,) + exp[i + 1:]
            coeffs[exp[i]][rest] = c
        return [MvPoly(d) for d in coeffs]

    @classmethod
    def from_coefficients_in(cls, name: str, coeffs: Iterable["MvPoly"]) -> "MvPoly":
        i = VAR_INDEX[name]
        acc: dict = {}
        for e, poly in enumerate(coeffs):
            for exp, c in poly.terms.items():
                if exp[i]:
                    raise ValueError("coefficient involves the main variable")
                nexp = exp[:i] + (e,) + exp[i + 1:]
                s = acc.get(nexp, Fraction(0)) + c
                if s:
                    acc[nexp] = s
                else:
                    acc.pop(nexp, None)
        return cls(acc)

    # ----- display --------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms as (exponent, coefficient), graded-lex descending in the
        print precedence x > y > u > v > w > t."""
        return sorted(self.terms.items(), key=lambda kv: print_key(kv[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coef in self.sorted_terms():
            factors = []
            for name in PRINT_ORDER:
                e = exp[VAR_INDEX[name]]
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            mag = abs(coef)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if not parts:
                parts.append(body if coef > 0 else "-" + body)
            else:
                parts.append((" + " if coef > 0 else " - ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"MvPoly({self})"


def _coerce(value) -> "MvPoly":
    if isinstance(value, MvPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return MvPoly.constant(value)
    return NotImplemented


class UvPoly:
    """Dense univariate polynomial over the rationals.

    Coefficients are stored ascending (index = degree) with trailing
    zeros trimmed; the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("variable", "coeffs")

    def __init__(self, variable: str, coeffs: Iterable[Scalar]):
        if variable not in VAR_INDEX:
            raise ValueError(f"unknown variable {variable!r}")
        cs = [_as_fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.variable = variable
        self.coeffs = tuple(cs)

    @classmethod
    def from_mvpoly(cls, poly: MvPoly, variable: str | None = None) -> "UvPoly":
        names = poly.variables
        if variable is None:
            if len(names) > 1:
                raise ValueError("polynomial is not univariate")
            variable = names[0] if names else "t"
        elif any(n != variable for n in names):
            raise ValueError(f"polynomial involves more than {variable!r}")
        i = VAR_INDEX[variable]
        deg = poly.degree_in(variable)
        cs = [Fraction(0)] * (deg + 1)
        for exp, c in poly.terms.items():
            cs[exp[i]] = c
        return cls(variable, cs)

    def to_mvpoly(self) -> MvPoly:
        i = VAR_INDEX[self.variable]
        acc = {}
        for e, c in enumerate(self.coeffs):
            if c:
                exp = [0] * NVARS
                exp[i] = e
                acc[tuple(exp)] = c
        return MvPoly(acc)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_coefficient(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __call__(self, point: Scalar) -> Fraction:
        point = _as_fraction(point)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def derivative(self) -> "UvPoly":
        return UvPoly(self.variable, [c * e for e, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "UvPoly") -> "UvPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return UvPoly(self.variable, [x + y for x, y in zip(a, b)])

    def __neg__(self) -> "UvPoly":
        return UvPoly(self.variable, [-c for c in self.coeffs])

    def __sub__(self, other: "UvPoly") -> "UvPoly":
        return self + (-other)

    def __mul__(self, other) -> "UvPoly":
        if isinstance(other, (int, Fraction)):
            return UvPoly(self.variable, [c * other for c in self.coeffs])
        if not isinstance(other, UvPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return UvPoly(self.variable, [])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return UvPoly(self.variable, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, UvPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and (
            not self.coeffs or self.variable == other.variable or self.is_constant())

    __hash__ = None

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def int_coeffs(self) -> list:
        """Integer-primitive coefficient list (ascending), same sign.
        Empty for zero.  The positive rescaling preserves roots and signs."""
        if not self.coeffs:
            return []
        from math import gcd, lcm
        den = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        return [c // g for c in ints] if g else ints

    def __str__(self) -> str:
        return str(self.to_mvpoly())

    def __repr__(self) -> str:
        return f"UvPoly({self})"
