"""Shared strategies and sympy bridges for the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from coiso.polycore import CoisoContext, Poly

settings.register_profile("default", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SYMBOLS = sympy.symbols("x1:9")


def to_sympy(p: Poly, symbols=None):
    symbols = symbols or SYMBOLS
    expr = sympy.Integer(0)
    for m, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(symbols, m):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, nvars: int, symbols=None) -> Poly:
    symbols = (symbols or SYMBOLS)[:nvars]
    sp = sympy.Poly(sympy.expand(expr), *symbols)
    return Poly(nvars, {m: Fraction(int(c.p), int(c.q)) for m, c in sp.terms()})


def polys(nvars: int, max_degree: int = 3, max_terms: int = 4):
    monomial = st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars).map(tuple)
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.dictionaries(monomial, coeff, max_size=max_terms).map(lambda d: Poly(nvars, d))


@st.composite
def contexts(draw, max_n: int = 3, max_nu: int = 2, min_n: int = 1):
    n = draw(st.integers(min_n, max_n))
    return CoisoContext(n, draw(st.integers(0, min(n, max_nu))))


seeds = st.integers(0, 2 ** 32 - 1)


def rng_from(seed: int) -> random.Random:
    return random.Random(seed)
