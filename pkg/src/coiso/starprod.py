"""Truncated formal star products and their verification.

A star product to order N is ``f * g = sum_r hbar^r C_r(f, g)`` with
``C_0`` the pointwise product.  For a constant compatible bivector P the
standard-ordered product uses an ordering matrix b with b - b^T = P whose
mixed tangential/transverse weight sits entirely in the first slot, so the
second slot never differentiates transversally and I[[hbar]] is a left ideal.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .hkr import hkr_pi
from .hochschild import Cochain, op_apply, op_compatible, pre_lie, vanishes_on_constants
from .multivector import MultiVector, mv_compatible
from .polycore import CoisoContext, Poly, madd, unit_index


@dataclass
class FormalSeries:
    """Polynomial coefficients of hbar^0 .. hbar^order."""

    coefficients: list
    order: int

    def __post_init__(self):
        if len(self.coefficients) > self.order + 1:
            raise ValueError("more coefficients than the truncation order allows")
        if not self.coefficients:
            raise ValueError("a formal series needs at least its hbar^0 coefficient")
        nv = self.coefficients[0].nvars
        while len(self.coefficients) < self.order + 1:
            self.coefficients.append(Poly.zero(nv))

    @classmethod
    def constant(cls, f: Poly, order: int) -> "FormalSeries":
        return cls([f], order)

    def __getitem__(self, r):
        return self.coefficients[r]

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.order == other.order and self.coefficients == other.coefficients

    def __add__(self, other):
        if self.order != other.order:
            raise ValueError("truncation orders differ")
        return FormalSeries([a + b for a, b in zip(self.coefficients, other.coefficients)],
                            self.order)

    def __sub__(self, other):
        if self.order != other.order:
            raise ValueError("truncation orders differ")
        return FormalSeries([a - b for a, b in zip(self.coefficients, other.coefficients)],
                            self.order)

    def format(self) -> str:
        parts = []
        for r, c in enumerate(self.coefficients):
            if c:
                parts.append(f"({c.format()})" + (f"*h^{r}" if r else ""))
        return " + ".join(parts) if parts else "0"


@dataclass
class StarProduct:
    ctx: CoisoContext
    cochains: list  # C_1 .. C_N
    poisson: MultiVector | None = None
    order: int = field(init=False)

    def __post_init__(self):
        for r, c in enumerate(self.cochains, start=1):
            if c.ctx != self.ctx:
                raise ValueError(f"C_{r} lives in a different context")
            if c.arity != 2:
                raise ValueError(f"C_{r} has arity {c.arity}, expected 2")
        self.order = len(self.cochains)

    def cochain(self, r: int) -> Cochain:
        return Cochain.mu(self.ctx) if r == 0 else self.cochains[r - 1]

    def truncated(self, order: int) -> "StarProduct":
        return StarProduct(self.ctx, self.cochains[:order], self.poisson)


def poisson_operator(p: MultiVector) -> Cochain:
    """The bidifferential operator (f, g) -> P(df, dg)."""
    ctx = p.ctx
    n = ctx.n
    terms: dict = {}
    for s, c in p.component(2).items():
        i, j = s
        a, b = unit_index(n, i), unit_index(n, j)
        terms[(a, b)] = terms.get((a, b), ctx.zero()) + c
        terms[(b, a)] = terms.get((b, a), ctx.zero()) - c
    return Cochain(ctx, 2, terms)


def _constant_entries(p: MultiVector) -> dict:
    """Pi^{ij} as a dict over ordered pairs, from a constant bivector."""
    if p.degrees() - {2}:
        raise ValueError("expected a bivector")
    pi = {}
    for (i, j), c in p.items():
        if not c.is_constant():
            raise ValueError("the standard-ordered construction needs constant coefficients")
        v = c.constant_term()
        pi[(i, j)] = v
        pi[(j, i)] = -v
    return pi


def ordering_matrix(p: MultiVector) -> dict:
    """b with b - b^T = P: halves on the tangential block, mixed weight on the transverse-first entry."""
    ctx = p.ctx
    if not mv_compatible(p):
        raise ValueError("bivector is not compatible with C")
    b = {}
    for (i, j), v in _constant_entries(p).items():
        ti, tj = ctx.is_transverse(i), ctx.is_transverse(j)
        if not ti and not tj:
            b[(i, j)] = v / 2
        elif ti and not tj:
            b[(i, j)] = v
    return b


def weyl_matrix(p: MultiVector) -> dict:
    """The symmetric choice b = P/2 everywhere (Moyal product)."""
    return {ij: v / 2 for ij, v in _constant_entries(p).items()}


def exponential_cochains(ctx: CoisoContext, b: dict, order: int) -> list:
    """C_r = B^r / r! for the constant bidifferential operator B = sum b^{ij} d_i (x) d_j."""
    n = ctx.n
    step = [((unit_index(n, i), unit_index(n, j)), v) for (i, j), v in sorted(b.items()) if v]
    zero = (0,) * n
    power = {(zero, zero): Fraction(1)}
    out = []
    for r in range(1, order + 1):
        nxt: dict = {}
        for (I, J), c in power.items():
            for (A, B), v in step:
                key = (madd(I, A), madd(J, B))
                s = nxt.get(key, 0) + c * v / r
                if s:
                    nxt[key] = s
                else:
                    nxt.pop(key, None)
        power = nxt
        out.append(Cochain(ctx, 2, {k: ctx.const(v) for k, v in power.items()}))
    return out


def build_standard_star(p: MultiVector, order: int = 6) -> StarProduct:
    return StarProduct(p.ctx, exponential_cochains(p.ctx, ordering_matrix(p), order), p)


def build_weyl_star(p: MultiVector, order: int = 6) -> StarProduct:
    return StarProduct(p.ctx, exponential_cochains(p.ctx, weyl_matrix(p), order), p)


def star_multiply(s: StarProduct, f: FormalSeries, g: FormalSeries) -> FormalSeries:
    if not f.order == g.order == s.order:
        raise ValueError(f"truncation orders differ: {f.order}, {g.order}, star {s.order}")
    N = s.order
    out = []
    for r in range(N + 1):
        total = s.ctx.zero()
        for c in range(r + 1):
            op = s.cochain(c)
            for a in range(r - c + 1):
                total = total + op_apply(op, [f[a], g[r - c - a]])
        out.append(total)
    return FormalSeries(out, N)


def associativity_defect(s: StarProduct, r: int) -> Cochain:
    """sum_{i+j=r} C_i o C_j, i.e. the hbar^r part of (f*g)*h - f*(g*h)."""
    total = Cochain.zero(s.ctx, 3)
    for i in range(r + 1):
        total = total + pre_lie(s.cochain(i), s.cochain(r - i))
    return total


def check_associativity(s: StarProduct, order: int | None = None) -> dict:
    N = s.order if order is None else min(order, s.order)
    for r in range(N + 1):
        if not associativity_defect(s, r).is_zero():
            return {"associative": False, "first_failure": r, "checked_through": N}
    return {"associative": True, "first_failure": None, "checked_through": N}


def associativity_on_triples(s: StarProduct, triples: Sequence) -> bool:
    """Extensional cross-check: (f*g)*h == f*(g*h) mod hbar^(N+1)."""
    N = s.order
    for f, g, h in triples:
        F, G, H = (FormalSeries.constant(x, N) for x in (f, g, h))
        if star_multiply(s, star_multiply(s, F, G), H) != star_multiply(s, F, star_multiply(s, G, H)):
            return False
    return True


def _random_poly(rng: random.Random, ctx: CoisoContext, degree: int, terms: int) -> Poly:
    out: dict = {}
    for _ in range(terms):
        m = [0] * ctx.n
        for _ in range(rng.randint(0, degree)):
            m[rng.randrange(ctx.n)] += 1
        out[tuple(m)] = out.get(tuple(m), 0) + rng.randint(-3, 3)
    return Poly(ctx.n, out)


def check_left_ideal(s: StarProduct, rng: random.Random | None = None,
                     samples: int = 20, degree: int = 3) -> dict:
    """Structural (C_r in G_I) and sampled (f * g in I[[hbar]] for g in I) checks."""
    ctx = s.ctx
    failing = [r for r in range(1, s.order + 1) if not op_compatible(s.cochain(r))]
    rng = rng or random.Random(0)
    counterexample = None
    if ctx.nu:
        for _ in range(samples):
            f = _random_poly(rng, ctx, degree, 4)
            j = rng.choice(list(ctx.transverse))
            g = Poly.var(ctx.n, j) * (_random_poly(rng, ctx, degree - 1, 3) + 1)
            bad = [r for r in range(1, s.order + 1)
                   if not ctx.in_ideal(op_apply(s.cochain(r), [f, g]))]
            if bad:
                counterexample = {"f": f.format(), "g": g.format(), "order": bad[0]}
                break
    return {
        "structural": not failing,
        "structural_first_failure": failing[0] if failing else None,
        "extensional": counterexample is None,
        "extensional_counterexample": counterexample,
    }


def check_axioms(s: StarProduct) -> dict:
    """Axioms (i)-(iv): zeroth order mu, bracket at first order, bidifferential, vanishing on 1."""
    ii = None
    if s.order >= 1:
        c1 = s.cochain(1)
        antisym = c1 - c1.swap()
        if s.poisson is not None:
            ii = antisym == poisson_operator(s.poisson)
        else:
            # without a given P, the antisymmetric part must itself come from a bivector
            ii = antisym == poisson_operator(hkr_pi(antisym).scale(Fraction(1, 2)))
    iv = all(vanishes_on_constants(s.cochain(r)) for r in range(1, s.order + 1))
    return {"i": True, "ii": ii, "iii": True, "iv": iv}


def verify_star(s: StarProduct, rng: random.Random | None = None) -> dict:
    assoc = check_associativity(s)
    ideal = check_left_ideal(s, rng)
    axioms = check_axioms(s)
    ok = (assoc["associative"] and ideal["structural"] and ideal["extensional"]
          and all(v is not False for v in axioms.values()))
    return {
        "order": s.order,
        "associativity_defect_first_failure": assoc["first_failure"],
        "left_ideal_structural": ideal["structural"],
        "left_ideal_extensional": ideal["extensional"],
        "left_ideal_first_failure": ideal["structural_first_failure"],
        "extensional_counterexample": ideal["extensional_counterexample"],
        "axioms": axioms,
        "ok": ok,
    }
