"""Seeded random generators for polynomials, multivectors, cochains and chains.

Every generator takes a ``random.Random`` so that runs are reproducible.
Compatible variants multiply offending coefficients by a transverse
coordinate, which lands them in I without changing the term structure.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .hochschild import Cochain
from .multivector import MultiVector
from .polycore import CoisoContext, Poly
from .resolutions import BarChain, KoszulChain


def random_context(rng: random.Random, max_n: int = 3, max_nu: int = 2,
                   min_n: int = 1) -> CoisoContext:
    n = rng.randint(min_n, max_n)
    return CoisoContext(n, rng.randint(0, min(n, max_nu)))


def random_monomial(rng: random.Random, nvars: int, degree: int) -> tuple:
    m = [0] * nvars
    for _ in range(rng.randint(0, degree)):
        m[rng.randrange(nvars)] += 1
    return tuple(m)


def random_poly(rng: random.Random, nvars: int, degree: int = 2, terms: int = 3,
                coeff: int = 3) -> Poly:
    out: dict = {}
    for _ in range(rng.randint(0, terms)):
        m = random_monomial(rng, nvars, degree)
        out[m] = out.get(m, 0) + rng.randint(-coeff, coeff)
    return Poly(nvars, out)


def random_ideal_element(rng: random.Random, ctx: CoisoContext, degree: int = 2) -> Poly:
    """x''_j times a random polynomial (zero when nu = 0)."""
    if not ctx.nu:
        return ctx.zero()
    j = rng.choice(list(ctx.transverse))
    return Poly.var(ctx.n, j) * random_poly(rng, ctx.n, max(degree - 1, 0), 3)


def _transverse_factor(rng: random.Random, ctx: CoisoContext) -> Poly:
    return Poly.var(ctx.n, rng.choice(list(ctx.transverse)))


def random_multivector(rng: random.Random, ctx: CoisoContext, k: int, degree: int = 2,
                       terms: int = 2) -> MultiVector:
    subsets = list(combinations(range(ctx.n), k))
    if not subsets:
        return MultiVector(ctx, {})
    out = {}
    for _ in range(rng.randint(1, terms)):
        s = rng.choice(subsets)
        out[s] = out.get(s, ctx.zero()) + random_poly(rng, ctx.n, degree, 2)
    return MultiVector(ctx, out)


def make_compatible(rng: random.Random, x: MultiVector) -> MultiVector:
    ctx = x.ctx
    out = {}
    for s, f in x.items():
        # with nu = 0 the ideal is zero, so purely transverse terms (scalars) must vanish
        if all(ctx.is_transverse(d) for d in s) and not ctx.in_ideal(f):
            f = f * _transverse_factor(rng, ctx) if ctx.nu else ctx.zero()
        out[s] = f
    return MultiVector(ctx, out)


def random_compatible_multivector(rng: random.Random, ctx: CoisoContext, k: int,
                                  degree: int = 2, terms: int = 2) -> MultiVector:
    return make_compatible(rng, random_multivector(rng, ctx, k, degree, terms))


def random_multi_index(rng: random.Random, n: int, order: int) -> tuple:
    return random_monomial(rng, n, order)


def random_cochain(rng: random.Random, ctx: CoisoContext, arity: int, degree: int = 2,
                   order: int = 2, terms: int = 2) -> Cochain:
    if arity == 0:
        return Cochain.function(ctx, random_poly(rng, ctx.n, degree, 2))
    out: dict = {}
    for _ in range(rng.randint(1, terms)):
        key = tuple(random_multi_index(rng, ctx.n, order) for _ in range(arity))
        out[key] = out.get(key, ctx.zero()) + random_poly(rng, ctx.n, degree, 2)
    return Cochain(ctx, arity, out)


def make_op_compatible(rng: random.Random, phi: Cochain) -> Cochain:
    ctx = phi.ctx
    out = {}
    for key, c in phi.items():
        # arity 0 cochains are elements of A and must lie in I themselves
        last_transverse = ctx.touches_transverse(key[-1]) if key else True
        if last_transverse and not ctx.in_ideal(c):
            c = c * _transverse_factor(rng, ctx) if ctx.nu else ctx.zero()
        out[key] = c
    return Cochain(ctx, phi.arity, out)


def random_compatible_cochain(rng: random.Random, ctx: CoisoContext, arity: int,
                              degree: int = 2, order: int = 2, terms: int = 2) -> Cochain:
    return make_op_compatible(rng, random_cochain(rng, ctx, arity, degree, order, terms))


def random_bar_chain(rng: random.Random, n: int, k: int, degree: int = 2,
                     terms: int = 3) -> BarChain:
    return BarChain(n, k, random_poly(rng, (k + 2) * n, degree, terms))


def random_koszul_chain(rng: random.Random, n: int, k: int, degree: int = 2,
                        terms: int = 2) -> KoszulChain:
    subsets = list(combinations(range(n), k))
    out: dict = {}
    if subsets:
        for _ in range(rng.randint(1, terms)):
            s = rng.choice(subsets)
            p = random_poly(rng, 2 * n, degree, 2)
            out[s] = out[s] + p if s in out else p
    return KoszulChain(n, k, out)


def random_constant_poisson(rng: random.Random, ctx: CoisoContext, density: float = 0.6,
                            coeff: int = 2) -> MultiVector:
    """Constant bivector with vanishing transverse-transverse block (hence compatible)."""
    out = {}
    for i, j in combinations(range(ctx.n), 2):
        if ctx.is_transverse(i) and ctx.is_transverse(j):
            continue
        if rng.random() < density:
            v = Fraction(rng.choice([c for c in range(-coeff, coeff + 1) if c]))
            if rng.random() < 0.3:
                v /= 2
            out[(i, j)] = Poly.const(ctx.n, v)
    return MultiVector(ctx, out)
