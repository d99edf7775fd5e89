"""Randomised invariant suite shared by the CLI and the tests.

Each family draws instances from its own generator, seeded in sorted-name
order from one master ``random.Random(seed)``, so a report depends only on
the seed and the bounds.  Witnesses are stored as parser-grammar text.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Callable

from . import resolutions as res
from .hkr import bracket_defect, hkr_pi, hkr_psi, hkr_psi_modified
from .hochschild import (Cochain, brace, cup_product, gerstenhaber_bracket, hochschild_b,
                         hochschild_b_explicit, op_apply, op_circ_i, op_compatible,
                         quotient_coboundary_action, restricted_last_slot)
from .multivector import (MultiVector, brst_differential, mv_compatible,
                          mv_project_psi, pair_exact_forms, schouten_bracket)
from .parser import parse_cochain, parse_multivector, parse_poly
from .polycore import CoisoContext, Poly
from .sampling import (make_compatible, random_bar_chain, random_cochain,
                       random_compatible_cochain, random_compatible_multivector,
                       random_constant_poisson, random_context, random_ideal_element,
                       random_koszul_chain, random_multivector, random_poly)
from .starprod import build_standard_star, verify_star


@dataclass(frozen=True)
class Bounds:
    max_n: int = 3
    max_nu: int = 2
    degree: int = 2
    max_k: int = 3
    instances: int = 50
    star_instances: int = 10
    order: int = 6


FAMILIES: dict = {}


def family(name: str):
    def register(fn):
        FAMILIES[name] = fn
        return fn
    return register


def _ctx_text(ctx: CoisoContext) -> str:
    return f"n={ctx.n}, nu={ctx.nu}"


def _sign(a: int) -> int:
    return -1 if a % 2 else 1


# oracles

def mv_compatible_oracle(x: MultiVector, rng: random.Random | None = None, samples: int = 5) -> bool:
    """Contract every homogeneous part against differentials of elements of I."""
    ctx = x.ctx
    rng = rng or random.Random(0)
    gens = [Poly.var(ctx.n, j) for j in ctx.transverse]
    for k, part in x.homogeneous_parts():
        if k == 0:
            if not all(ctx.in_ideal(f) for f in part.terms.values()):
                return False
            continue
        tuples = list(combinations(gens, k)) if k <= len(gens) else []
        for _ in range(samples):
            tuples.append(tuple(random_ideal_element(rng, ctx) for _ in range(k)))
        for gs in tuples:
            if not ctx.in_ideal(pair_exact_forms(part, list(gs))):
                return False
    return True


def op_compatible_oracle(phi: Cochain, rng: random.Random | None = None, samples: int = 5) -> bool:
    """Evaluate phi with an element of I in the last slot.

    Besides random samples g = x''_j * r, each term is probed with the
    monomials x^{I_1}, ..., x^{I_k} read off its own slots; a minimal
    offending term then survives restriction to C, so the probe is exhaustive.
    """
    ctx = phi.ctx
    if phi.arity == 0:
        return all(ctx.in_ideal(c) for c in phi.terms.values())
    if not ctx.nu:
        return True
    rng = rng or random.Random(0)
    probes = []
    for key in phi.terms:
        if ctx.touches_transverse(key[-1]):
            probes.append([Poly.monomial(idx) for idx in key])
    for _ in range(samples):
        fs = [random_poly(rng, ctx.n, 2, 3) for _ in range(phi.arity - 1)]
        probes.append(fs + [random_ideal_element(rng, ctx)])
    return all(ctx.in_ideal(op_apply(phi, fs)) for fs in probes)


# families

@family("hkr.classical")
def _hkr_classical(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        k = rng.randint(0, min(ctx.n, b.max_k))
        x = random_multivector(rng, ctx, k, b.degree)
        psi = hkr_psi(x, degree=k)
        ok = hkr_pi(psi) == x and (k == 0 or hochschild_b(psi).is_zero())
        yield ok, {"context": _ctx_text(ctx), "x": x.format()}


@family("hkr.modified")
def _hkr_modified(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        k = rng.randint(0, min(ctx.n, b.max_k))
        x = random_compatible_multivector(rng, ctx, k, b.degree)
        psi = hkr_psi_modified(x, require_compatible=True, degree=k)
        ok = (hkr_pi(psi) == x and (k == 0 or hochschild_b(psi).is_zero())
              and op_compatible(psi))
        yield ok, {"context": _ctx_text(ctx), "x": x.format()}


@family("hkr.bracket_defect")
def _hkr_defect(rng, b, hooks):
    for _ in range(max(25, b.instances // 2)):
        ctx = random_context(rng, b.max_n, b.max_nu, min_n=2)
        k = rng.randint(1, min(ctx.n, 2))
        l = rng.randint(1, min(ctx.n, 2))
        x = random_compatible_multivector(rng, ctx, k, b.degree, 1)
        y = random_compatible_multivector(rng, ctx, l, b.degree, 1)
        _, cocycle, vanishes = bracket_defect(x, y, "modified", degrees=(k, l))
        yield cocycle and vanishes, {"context": _ctx_text(ctx), "x": x.format(), "y": y.format()}


@family("hochschild.b_squared")
def _b_squared(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        phi = random_cochain(rng, ctx, rng.randint(0, b.max_k), b.degree)
        ok = hochschild_b(hochschild_b(phi)).is_zero()
        yield ok, {"context": _ctx_text(ctx), "phi": phi.format()}


@family("hochschild.b_two_ways")
def _b_two_ways(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        phi = random_cochain(rng, ctx, rng.randint(0, b.max_k), b.degree)
        yield hochschild_b(phi) == hochschild_b_explicit(phi), {
            "context": _ctx_text(ctx), "phi": phi.format()}


def _graded_lie(bracket, deg, x, y, z):
    sxy = _sign(deg(x) * deg(y))
    anti = _equal(bracket(x, y), -(bracket(y, x).scale(sxy)))
    lhs = bracket(x, bracket(y, z))
    rhs = _add(bracket(bracket(x, y), z), bracket(y, bracket(x, z)).scale(sxy))
    return anti, _equal(lhs, rhs)


# the bracket of two functions lands in the zero space below arity 0, which is
# represented by a zero of arity 0; zeros therefore compare by value only

def _add(a, b):
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    return a + b


def _equal(a, b):
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return a == b


@family("hochschild.gerstenhaber_lie")
def _gerstenhaber_lie(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, min(b.max_n, 2), b.max_nu)
        xs = [random_cochain(rng, ctx, rng.randint(0, 2), 1, 2, 1) for _ in range(3)]
        anti, jac = _graded_lie(gerstenhaber_bracket, lambda c: c.arity - 1, *xs)
        yield anti and jac, {"context": _ctx_text(ctx),
                             **{f"phi{i + 1}": c.format() for i, c in enumerate(xs)}}


@family("hochschild.insertion_coherence")
def _insertion(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        k = rng.randint(1, b.max_k)
        l = rng.randint(0, 2)
        phi = random_cochain(rng, ctx, k, b.degree)
        psi = random_cochain(rng, ctx, l, b.degree)
        i = rng.randint(1, k)
        fs = [random_poly(rng, ctx.n, 3, 3) for _ in range(k + l - 1)]
        inner = op_apply(psi, fs[i - 1:i - 1 + l])
        direct = op_apply(phi, fs[:i - 1] + [inner] + fs[i - 1 + l:])
        ok = op_apply(op_circ_i(phi, psi, i), fs) == direct
        yield ok, {"context": _ctx_text(ctx), "phi": phi.format(), "psi": psi.format(),
                   "slot": str(i)}


@family("hochschild.compatible_ideal")
def _compatible_ideal(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu, min_n=1)
        phi = random_cochain(rng, ctx, rng.randint(0, 2), b.degree)
        psi = random_compatible_cochain(rng, ctx, rng.randint(0, 2), b.degree)
        chi = random_compatible_cochain(rng, ctx, rng.randint(0, 2), b.degree)
        ok = (op_compatible(Cochain.mu(ctx))
              and op_compatible(cup_product(phi, psi))
              and _compat_bracket(psi, chi)
              and op_compatible(hochschild_b(psi)))
        yield ok, {"context": _ctx_text(ctx), "phi": phi.format(), "psi": psi.format(),
                   "chi": chi.format()}


@family("hochschild.quotient_projection")
def _quotient(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        k = rng.randint(1, b.max_k)
        phi = random_cochain(rng, ctx, k, b.degree)
        fs = [random_poly(rng, ctx.n, b.degree, 3) for _ in range(k)]
        g = random_ideal_element(rng, ctx, b.degree + 1)
        ok = restricted_last_slot(hochschild_b(phi), fs, g) == quotient_coboundary_action(phi, fs, g)
        psi = random_compatible_cochain(rng, ctx, k, b.degree)
        ok = ok and restricted_last_slot(psi, fs[:-1], g).is_zero()
        yield ok, {"context": _ctx_text(ctx), "phi": phi.format(), "psi": psi.format(),
                   "fs": " ; ".join(f.format() for f in fs), "g": g.format()}


def _compat_bracket(psi, chi):
    if psi.arity + chi.arity == 0:
        return True
    return op_compatible(gerstenhaber_bracket(psi, chi))


@family("hochschild.compatible_oracle")
def _compatible_oracle(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu, min_n=1)
        k = rng.randint(0, b.max_k)
        phi = random_cochain(rng, ctx, k, b.degree)
        if rng.random() < 0.5:
            phi = random_compatible_cochain(rng, ctx, k, b.degree)
        ok = op_compatible(phi) == op_compatible_oracle(phi, rng)
        yield ok, {"context": _ctx_text(ctx), "phi": phi.format()}


@family("hochschild.brace")
def _brace(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        e = random_cochain(rng, ctx, rng.randint(1, 2), b.degree, 2, 1)
        f = random_cochain(rng, ctx, rng.randint(1, 2), b.degree, 2, 1)
        s = _sign((e.arity - 1) * (f.arity - 1))
        anti = brace(e, [f]) - brace(f, [e]).scale(s) == gerstenhaber_bracket(e, f)
        ce = random_compatible_cochain(rng, ctx, rng.randint(1, 3), b.degree, 2, 1)
        fs = [random_compatible_cochain(rng, ctx, rng.randint(0, 2), b.degree, 1, 1)
              for _ in range(rng.randint(1, ce.arity))]
        closed = op_compatible(brace(ce, fs))
        yield anti and closed, {"context": _ctx_text(ctx), "e": e.format(), "f": f.format(),
                                "compatible_e": ce.format(),
                                "compatible_fs": " ; ".join(x.format() for x in fs)}


@family("multivector.schouten_lie")
def _schouten_lie(rng, b, hooks):
    bracket = hooks["schouten"]
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu, min_n=2)
        xs = [random_multivector(rng, ctx, rng.randint(0, min(ctx.n, 2)), b.degree)
              for _ in range(3)]
        anti, jac = _graded_lie(bracket, lambda x: (x.degree() or 0) - 1, *xs)
        yield anti and jac, {"context": _ctx_text(ctx),
                             **{f"x{i + 1}": x.format() for i, x in enumerate(xs)}}


@family("multivector.leibniz")
def _schouten_leibniz(rng, b, hooks):
    bracket = hooks["schouten"]
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu, min_n=2)
        k, l, m = (rng.randint(0, min(ctx.n, 2)) for _ in range(3))
        x, y, z = (random_multivector(rng, ctx, d, b.degree) for d in (k, l, m))
        lhs = bracket(x, y.wedge(z))
        rhs = bracket(x, y).wedge(z).scale(_sign((k - 1) * m)) + y.wedge(bracket(x, z))
        yield lhs == rhs, {"context": _ctx_text(ctx), "x": x.format(), "y": y.format(),
                           "z": z.format()}


@family("multivector.compatible_closure")
def _mv_closure(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        x = random_compatible_multivector(rng, ctx, rng.randint(0, ctx.n), b.degree)
        y = random_compatible_multivector(rng, ctx, rng.randint(0, ctx.n), b.degree)
        z = random_multivector(rng, ctx, rng.randint(0, ctx.n), b.degree)
        ok = (mv_compatible(schouten_bracket(x, y)) and mv_compatible(x.wedge(y))
              and mv_compatible(x.wedge(z)))
        yield ok, {"context": _ctx_text(ctx), "x": x.format(), "y": y.format(), "z": z.format()}


@family("multivector.compatible_oracle")
def _mv_oracle(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        x = random_multivector(rng, ctx, rng.randint(0, ctx.n), b.degree)
        if rng.random() < 0.5:
            x = make_compatible(rng, x)
        ok = (mv_compatible(x) == mv_compatible_oracle(x, rng)
              and mv_project_psi(x).is_zero() == mv_compatible(x))
        yield ok, {"context": _ctx_text(ctx), "x": x.format()}


def random_poisson(rng: random.Random, ctx: CoisoContext, degree: int = 1) -> MultiVector:
    """Compatible bivector with [P, P] = 0: a constant one, or f e_{ij} with i tangential."""
    if rng.random() < 0.5 or ctx.n < 2 or ctx.nu == ctx.n:
        return random_constant_poisson(rng, ctx)
    i = rng.choice(list(ctx.tangential))
    j = rng.choice([d for d in range(ctx.n) if d != i])
    f = random_poly(rng, ctx.n, degree, 2)
    return MultiVector(ctx, {(i, j): f})


@family("multivector.brst")
def _brst(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu, min_n=2)
        ctx = ctx if ctx.nu else CoisoContext(ctx.n, 1)
        p = random_poisson(rng, ctx)
        if not schouten_bracket(p, p).is_zero():
            continue
        k = rng.randint(0, ctx.nu)
        a = mv_project_psi(random_multivector(rng, ctx, 0, b.degree).wedge(
            random_transverse_wedge(rng, ctx, k)))
        d_a = brst_differential(p, a)
        d2 = brst_differential(p, d_a).is_zero()
        lift = a.lift() + random_compatible_multivector(rng, ctx, k, b.degree)
        same = brst_differential(p, a, lift=lift) == d_a
        yield d2 and same, {"context": _ctx_text(ctx), "p": p.format(), "a": a.format(),
                            "lift": lift.format()}


def random_transverse_wedge(rng: random.Random, ctx: CoisoContext, k: int) -> MultiVector:
    dirs = rng.sample(list(ctx.transverse), k)
    return MultiVector.basis(ctx, *dirs)


@family("parser.round_trip")
def _round_trip(rng, b, hooks):
    for _ in range(b.instances):
        ctx = random_context(rng, b.max_n, b.max_nu)
        kind = rng.choice(["poly", "multivector", "cochain"])
        if kind == "poly":
            v = random_poly(rng, ctx.n, b.degree + 1, 4)
            ok = parse_poly(v.format(), ctx) == v
        elif kind == "multivector":
            v = random_multivector(rng, ctx, rng.randint(0, ctx.n), b.degree, 3)
            ok = parse_multivector(v.format(), ctx) == v
        else:
            v = random_cochain(rng, ctx, rng.randint(0, b.max_k), b.degree)
            if rng.random() < 0.1:
                v = Cochain.zero(ctx, v.arity)
            ok = parse_cochain(v.format(), ctx) == v
        yield ok, {"context": _ctx_text(ctx), "kind": kind, "text": v.format()}


@family("polycore.ring_laws")
def _ring(rng, b, hooks):
    for _ in range(b.instances):
        n = rng.randint(1, b.max_n)
        ctx = CoisoContext(n, rng.randint(0, min(n, b.max_nu)))
        p, q, r = (random_poly(rng, n, 3, 4) for _ in range(3))
        i = rng.randrange(n)
        ok = (p * (q + r) == p * q + p * r and (p * q) * r == p * (q * r)
              and (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)
              and ctx.restrict(p * q) == ctx.restrict(p) * ctx.restrict(q))
        g = random_ideal_element(rng, ctx)
        ok = ok and ctx.in_ideal(g * p)
        yield ok, {"context": _ctx_text(ctx), "p": p.format(), "q": q.format(), "r": r.format()}


def _bar_text(c):
    return f"k={c.k}: {c.format()}"


@family("resolutions.bar")
def _bar(rng, b, hooks):
    for _ in range(b.instances):
        n = rng.randint(1, b.max_n)
        k = rng.randint(0, b.max_k)
        c = random_bar_chain(rng, n, k, b.degree)
        f = random_poly(rng, n, b.degree)
        ok = res.augmentation(res.bar_prolong(n, f)) == f
        h = res.bar_homotopy(c)
        if k == 0:
            ok = ok and res.bar_prolong(n, res.augmentation(c)) + res.bar_boundary(h) == c
            ok = ok and res.augmentation(res.bar_boundary(random_bar_chain(rng, n, 1, b.degree))).is_zero()
        else:
            ok = ok and res.bar_homotopy(res.bar_boundary(c)) + res.bar_boundary(h) == c
            ok = ok and (k < 2 or res.bar_boundary(res.bar_boundary(c)).is_zero())
            fab = random_poly(rng, 2 * n, 1, 2)
            ok = ok and res.bar_boundary(res.bar_act(fab, c)) == res.bar_act(fab, res.bar_boundary(c))
        yield ok, {"n": str(n), "chain": _bar_text(c)}


@family("resolutions.koszul")
def _koszul(rng, b, hooks):
    for _ in range(b.instances):
        n = rng.randint(1, b.max_n)
        k = rng.randint(0, min(n, b.max_k))
        c = random_koszul_chain(rng, n, k, b.degree)
        f = random_poly(rng, n, b.degree)
        ok = res.augmentation(res.koszul_prolong(n, f)) == f
        h = res.koszul_homotopy(c)
        if k == 0:
            ok = ok and res.koszul_prolong(n, res.augmentation(c)) + res.koszul_boundary(h) == c
        else:
            ok = ok and res.koszul_homotopy(res.koszul_boundary(c)) + res.koszul_boundary(h) == c
            ok = ok and (k < 2 or res.koszul_boundary(res.koszul_boundary(c)).is_zero())
            fab = random_poly(rng, 2 * n, 1, 2)
            ok = ok and (res.koszul_boundary(res.koszul_act(fab, c))
                         == res.koszul_act(fab, res.koszul_boundary(c)))
        yield ok, {"n": str(n), "chain": f"k={k}: {c.format()}"}


@family("resolutions.comparison")
def _comparison(rng, b, hooks):
    for _ in range(b.instances):
        n = rng.randint(1, b.max_n)
        k = rng.randint(1, b.max_k)
        c = random_bar_chain(rng, n, k, b.degree)
        kk = min(k, n)
        w = random_koszul_chain(rng, n, kk, b.degree)
        ok = res.map_G(res.bar_boundary(c)) == res.koszul_boundary(res.map_G(c))
        ok = ok and res.map_F(res.koszul_boundary(w)) == res.bar_boundary(res.map_F(w))
        ok = ok and res.map_G(res.map_F(w)) == w
        t = res.theta(c)
        ok = ok and res.theta(t) == t
        fab = random_poly(rng, 2 * n, 1, 2)
        ok = ok and res.map_G(res.bar_act(fab, c)) == res.koszul_act(fab, res.map_G(c))
        yield ok, {"n": str(n), "bar_chain": _bar_text(c), "koszul_chain": f"k={kk}: {w.format()}"}


@family("starprod.standard")
def _star(rng, b, hooks):
    for _ in range(b.star_instances):
        n = rng.randint(2, max(2, b.max_n))
        ctx = CoisoContext(n, rng.randint(1, min(n - 1, b.max_nu)))
        p = random_constant_poisson(rng, ctx)
        report = verify_star(build_standard_star(p, b.order), rng)
        yield report["ok"], {"context": _ctx_text(ctx), "poisson": p.format()}


def run_suite(seed: int = 0, bounds: Bounds = Bounds(), hooks: dict | None = None,
              only: Callable[[str], bool] | None = None) -> dict:
    hooks = {"schouten": schouten_bracket, **(hooks or {})}
    master = random.Random(seed)
    results = []
    for name in sorted(FAMILIES):
        rng = random.Random(master.getrandbits(64))
        if only is not None and not only(name):
            continue
        instances = failures = 0
        first = None
        try:
            for ok, witness in FAMILIES[name](rng, bounds, hooks):
                instances += 1
                if not ok:
                    failures += 1
                    if first is None:
                        first = witness
        except Exception as exc:  # a crash is reported as a failing instance
            failures += 1
            first = first or {"error": f"{type(exc).__name__}: {exc}"}
        results.append({"name": name, "instances": instances, "failures": failures,
                        "first_counterexample": first})
    return {"seed": seed, "bounds": asdict(bounds), "families": results,
            "ok": all(r["failures"] == 0 for r in results)}
