"""Hochschild-Kostant-Rosenberg maps between multivectors and cochains.

``hkr_psi`` antisymmetrises a k-vector into a k-differential operator with
weight 1/k!.  ``hkr_psi_modified`` first splits each direction set into its
transverse part followed by its tangential part, antisymmetrises the two
parts separately and places the transverse slots first, so that the last
slot of every term with a tangential direction only differentiates along C.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial

from .hochschild import Cochain, gerstenhaber_bracket, hochschild_b
from .multivector import MultiVector, mv_compatible, schouten_bracket, sort_sign
from .polycore import unit_index


def _alternate(n: int, dirs: tuple):
    """Yield ``(sign, slot tuple)`` for the unnormalised antisymmetrisation of e_dirs."""
    for perm in permutations(range(len(dirs))):
        sign, _ = sort_sign(perm)
        yield sign, tuple(unit_index(n, dirs[p]) for p in perm)


def hkr_psi(x: MultiVector, degree: int | None = None) -> Cochain:
    """f e_S -> f (1/k!) sum_sigma sign(sigma) d_{s_sigma1} | ... | d_{s_sigmak}.

    ``degree`` fixes the arity of the result for the zero multivector; a
    nonzero input must be homogeneous.
    """
    ctx = x.ctx
    k = _homogeneous_degree(x, degree)
    out: dict = {}
    weight = Fraction(1, factorial(k))
    for s, f in x.items():
        for sign, key in _alternate(ctx.n, s):
            out[key] = out.get(key, ctx.zero()) + f.scale(sign * weight)
    return Cochain(ctx, k, out)


def hkr_pi(phi: Cochain) -> MultiVector:
    """Keep terms whose slots are all first-order and wedge their directions."""
    ctx = phi.ctx
    terms: dict = {}
    for key, c in phi.items():
        if all(sum(idx) == 1 for idx in key):
            dirs = tuple(idx.index(1) for idx in key)
            sign, s = sort_sign(dirs)
            if sign:
                terms[s] = terms.get(s, ctx.zero()) + (c if sign > 0 else -c)
    return MultiVector(ctx, terms)


def transverse_first(ctx, dirs: tuple):
    """Sign and split so that e_dirs = sign * e_{transverse part} ^ e_{tangential part}."""
    trans = tuple(d for d in dirs if ctx.is_transverse(d))
    tang = tuple(d for d in dirs if not ctx.is_transverse(d))
    sign, _ = sort_sign(trans + tang)
    return sign, trans, tang


def hkr_psi_modified(x: MultiVector, require_compatible: bool = False,
                     degree: int | None = None) -> Cochain:
    ctx = x.ctx
    if require_compatible and not mv_compatible(x):
        raise ValueError("multivector is not compatible with C")
    k = _homogeneous_degree(x, degree)
    out: dict = {}
    for s, f in x.items():
        sign, trans, tang = transverse_first(ctx, s)
        w = Fraction(sign, factorial(len(trans)) * factorial(len(tang)))
        for s2, k2 in _alternate(ctx.n, trans):
            for s1, k1 in _alternate(ctx.n, tang):
                key = k2 + k1
                out[key] = out.get(key, ctx.zero()) + f.scale(w * s2 * s1)
    return Cochain(ctx, k, out)


def _homogeneous_degree(x: MultiVector, degree):
    degs = x.degrees()
    if len(degs) > 1:
        raise ValueError(f"HKR maps need a homogeneous multivector, got degrees {sorted(degs)}")
    if degs:
        k = degs.pop()
        if degree is not None and degree != k:
            raise ValueError(f"multivector has degree {k}, not {degree}")
        return k
    if degree is None:
        return 0
    return degree


def bracket_defect(x: MultiVector, y: MultiVector, which: str = "classical",
                   degrees: tuple | None = None):
    """Delta = [psi x, psi y]_G - psi [x, y]_S with its cocycle and projection flags.

    Both flags true certify that Delta is a Hochschild coboundary.
    ``degrees`` gives the degrees of x and y when either may be zero.
    """
    if which == "classical":
        psi = hkr_psi
    elif which == "modified":
        if not (mv_compatible(x) and mv_compatible(y)):
            raise ValueError("modified bracket defect needs compatible multivectors")
        psi = hkr_psi_modified
    else:
        raise ValueError(f"unknown HKR map {which!r}")
    kx = _homogeneous_degree(x, degrees[0] if degrees else None)
    ky = _homogeneous_degree(y, degrees[1] if degrees else None)
    kb = kx + ky - 1
    left = gerstenhaber_bracket(psi(x, degree=kx), psi(y, degree=ky))
    if kb < 0:
        return left, True, True
    delta = left - psi(schouten_bracket(x, y), degree=kb)
    return delta, hochschild_b(delta).is_zero(), hkr_pi(delta).is_zero()
