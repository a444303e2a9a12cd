"""Shared helpers: sympy conversion oracles, random poly generators, and
the worked example maps used across test modules."""

import random
from fractions import Fraction

import pytest

from flatimage.mvpoly import MvPoly, UvPoly, VARS

sympy = pytest.importorskip("sympy")

SYM = {name: sympy.Symbol(name) for name in VARS}

U = MvPoly.var("u")
V = MvPoly.var("v")
W = MvPoly.var("w")
X = MvPoly.var("x")
Y = MvPoly.var("y")


def fitness_map():
    """Elementary symmetric pair (e2, e3) on the ball."""
    return U * V + V * W + W * U, U * V * W


def square_map():
    return U ** 2 + W ** 2, V ** 2 + W ** 2


def triangle_map():
    return (U ** 2 + 2 * V ** 2 + W ** 2 - 1,
            U ** 2 + V ** 2 + 2 * W ** 2 - 1)


def pancake_map():
    # planar: the disk folds over itself under this cubic shear
    return (U + U * V) / 2, (V - U ** 3) / 2


def quadric_map():
    """The dense pair of quadrics used for the generic (2,2,2) instance."""
    f = (U * V - U * W + 7 * V ** 2 + V * W + 5 * W ** 2
         + U + V + W + 1)
    g = (U ** 2 - U * V + U * W - V ** 2 + V * W - W ** 2
         + U - V + W - 1)
    return f, g


def perturbed_chebyshev_map(eps=Fraction(1, 10)):
    """(T2(u) + eps*v, T3(u) + eps*w): a thickened curve image."""
    f = 2 * U ** 2 - 1 + eps * V
    g = 4 * U ** 3 - 3 * U + eps * W
    return f, g


def to_sympy(p: MvPoly):
    expr = sympy.Integer(0)
    for exp, coef in p.terms.items():
        term = sympy.Rational(coef.numerator, coef.denominator)
        for i, e in enumerate(exp):
            if e:
                term *= SYM[VARS[i]] ** e
        expr += term
    return sympy.expand(expr)


def uv_to_sympy(f: UvPoly):
    t = SYM[f.variable]
    return sum(sympy.Rational(c.numerator, c.denominator) * t ** i
               for i, c in enumerate(f.coeffs))


def random_mvpoly(rng: random.Random, names=("x", "y"), max_terms=4,
                  max_exp=3, max_coef=6, allow_zero=True) -> MvPoly:
    while True:
        terms = []
        for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
            c = 0
            while c == 0:
                c = rng.randint(-max_coef, max_coef)
            powers = {n: rng.randint(0, max_exp) for n in names}
            terms.append((Fraction(c), powers))
        p = MvPoly.from_terms(terms)
        if allow_zero or not p.is_zero():
            return p


def random_int_coeffs(rng: random.Random, max_deg=6, max_coef=9) -> list:
    deg = rng.randint(1, max_deg)
    coeffs = [rng.randint(-max_coef, max_coef) for _ in range(deg)]
    lead = 0
    while lead == 0:
        lead = rng.randint(-max_coef, max_coef)
    coeffs.append(lead)
    return coeffs
