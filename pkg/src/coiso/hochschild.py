"""Polydifferential Hochschild cochains with polynomial coefficients.

A k-cochain is kept in standard-order normal form

    phi(f_1, ..., f_k) = sum  c_{I_1..I_k}(x) (d^{I_1} f_1) ... (d^{I_k} f_k)

and stored as a map from k-tuples of multi-indices to nonzero coefficient
polynomials.  The arity is part of the value, so the zero 2-cochain differs
from the zero 3-cochain.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .polycore import CoisoContext, MultiIndex, Poly, join_signed


def _accumulate(out: dict, key, poly: Poly):
    if poly.is_zero():
        return
    cur = out.get(key)
    s = poly if cur is None else cur + poly
    if s.is_zero():
        out.pop(key, None)
    else:
        out[key] = s


class Cochain:
    __slots__ = ("ctx", "arity", "_terms")

    def __init__(self, ctx: CoisoContext, arity: int,
                 terms: Mapping[Sequence[MultiIndex], Poly] | None = None):
        if arity < 0:
            raise ValueError("arity must be non-negative")
        self.ctx = ctx
        self.arity = arity
        out: dict = {}
        for key, coeff in (terms or {}).items():
            key = tuple(tuple(i) for i in key)
            if len(key) != arity:
                raise ValueError(f"term {key} does not have {arity} slots")
            for idx in key:
                if len(idx) != ctx.n or any(e < 0 for e in idx):
                    raise ValueError(f"bad multi-index {idx} for n={ctx.n}")
            _accumulate(out, key, ctx.check(coeff))
        self._terms = out

    @classmethod
    def _raw(cls, ctx, arity, terms):
        c = cls.__new__(cls)
        c.ctx, c.arity, c._terms = ctx, arity, terms
        return c

    @classmethod
    def zero(cls, ctx: CoisoContext, arity: int) -> "Cochain":
        return cls._raw(ctx, arity, {})

    @classmethod
    def function(cls, ctx: CoisoContext, f: Poly) -> "Cochain":
        """A 0-cochain, i.e. an element of A."""
        return cls(ctx, 0, {(): f})

    @classmethod
    def mu(cls, ctx: CoisoContext) -> "Cochain":
        """Pointwise multiplication."""
        z = (0,) * ctx.n
        return cls(ctx, 2, {(z, z): ctx.const(1)})

    @classmethod
    def derivation(cls, ctx: CoisoContext, i: int, coeff: Poly | None = None) -> "Cochain":
        """``coeff * d/dx^i`` (0-based ``i``)."""
        idx = tuple(1 if j == i else 0 for j in range(ctx.n))
        return cls(ctx, 1, {(idx,): ctx.const(1) if coeff is None else coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self) -> int:
        """Degree in the shifted grading G[-1]."""
        return self.arity - 1

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.ctx == other.ctx and self.arity == other.arity
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.ctx, self.arity, frozenset(self._terms.items())))

    def __repr__(self):
        return f"Cochain({self.arity}, {self.format()!r})"

    def __str__(self):
        return self.format()

    def _same(self, other: "Cochain"):
        if other.ctx != self.ctx:
            raise ValueError("cochains live in different contexts")
        if other.arity != self.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            _accumulate(out, k, c)
        return Cochain._raw(self.ctx, self.arity, out)

    def __neg__(self):
        return Cochain._raw(self.ctx, self.arity, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Cochain":
        if isinstance(c, Poly):
            out: dict = {}
            for k, p in self._terms.items():
                _accumulate(out, k, p * c)
            return Cochain._raw(self.ctx, self.arity, out)
        c = Fraction(c)
        if not c:
            return Cochain.zero(self.ctx, self.arity)
        return Cochain._raw(self.ctx, self.arity, {k: p.scale(c) for k, p in self._terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def swap(self) -> "Cochain":
        """Reverse the slot order (used for the antisymmetric part of bidifferential operators)."""
        return Cochain._raw(self.ctx, self.arity,
                            {tuple(reversed(k)): c for k, c in self._terms.items()})

    def max_order(self) -> int:
        return max((sum(i) for k in self._terms for i in k), default=0)

    def format(self) -> str:
        n = self.ctx.n
        if not self._terms:
            if self.arity == 0:
                return "0"
            z = "(" + ",".join("0" for _ in range(n)) + ")"
            return "0*D[" + "|".join([z] * self.arity) + "]"
        pieces = []
        for key in sorted(self._terms, key=_slot_key):
            op = ("D[" + "|".join("(" + ",".join(map(str, i)) + ")" for i in key) + "]"
                  if self.arity else "")
            for m, c in self._terms[key].sorted_items():
                mono = "*".join(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                                for i, e in enumerate(m) if e)
                body = "*".join(p for p in (mono, op) if p)
                pieces.append((c, body))
        return join_signed(pieces)


def _slot_key(key):
    return tuple((-sum(i), tuple(-e for e in i)) for i in key)


# evaluation

def op_apply(phi: Cochain, fs: Sequence[Poly]) -> Poly:
    if len(fs) != phi.arity:
        raise ValueError(f"arity mismatch: {phi.arity}-cochain applied to {len(fs)} arguments")
    ctx = phi.ctx
    for f in fs:
        ctx.check(f)
    cache: dict = {}

    def d(j, idx):
        key = (j, idx)
        if key not in cache:
            cache[key] = fs[j].diff_multi(idx)
        return cache[key]

    total = ctx.zero()
    for key, c in phi.items():
        term = c
        for j, idx in enumerate(key):
            term = term * d(j, idx)
            if term.is_zero():
                break
        total = total + term
    return total


# insertion

def _compositions(total: int, parts: int):
    """All ways to write ``total`` as an ordered sum of ``parts`` non-negative ints."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _leibniz_splits(index: MultiIndex, parts: int) -> tuple:
    """All ``(multinomial, (A_0, ..., A_{parts-1}))`` with sum A_j = index."""
    per_coord = []
    for e in index:
        options = []
        for comp in _compositions(e, parts):
            coef = 1
            rest = e
            for a in comp:
                coef *= comb(rest, a)
                rest -= a
            options.append((coef, comp))
        per_coord.append(options)

    out = []

    def rec(i, coef, acc):
        if i == len(per_coord):
            out.append((coef, tuple(tuple(a[j] for a in acc) for j in range(parts))))
            return
        for c, comp in per_coord[i]:
            rec(i + 1, coef * c, acc + [comp])

    rec(0, 1, [])
    return tuple(out)


@lru_cache(maxsize=None)
def _bounded_subindices(index: MultiIndex, bound: MultiIndex) -> tuple:
    """``(binomial, A)`` for A <= index componentwise with A <= bound."""
    out = []

    def rec(i, coef, acc):
        if i == len(index):
            out.append((coef, tuple(acc)))
            return
        for a in range(min(index[i], bound[i]) + 1):
            rec(i + 1, coef * comb(index[i], a), acc + [a])

    rec(0, 1, [])
    return tuple(out)


def _max_exponents(p: Poly) -> MultiIndex:
    return tuple(max((m[i] for m in p._terms), default=0) for i in range(p.nvars))


def _collect(nvars: int, acc: dict) -> dict:
    out = {}
    for key, coeffs in acc.items():
        clean = {m: v for m, v in coeffs.items() if v}
        if clean:
            out[key] = Poly._raw(nvars, clean)
    return out


def op_circ_i(phi: Cochain, psi: Cochain, i: int) -> Cochain:
    """Insert ``psi`` into slot ``i`` (1-based) of ``phi``.

    The outer operator's coefficients are not differentiated; the slot's
    derivative is distributed over the inner coefficient and the inner
    arguments by the general Leibniz rule.
    """
    if phi.ctx != psi.ctx:
        raise ValueError("cochains live in different contexts")
    k, l = phi.arity, psi.arity
    if not 1 <= i <= k:
        raise IndexError(f"slot {i} out of range 1..{k}")
    acc: dict = {}
    inner = [(key, d, _max_exponents(d)) for key, d in psi.items()]
    for key, c in phi.items():
        outer = key[i - 1]
        head, tail = key[:i - 1], key[i:]
        for inner_key, d, bound in inner:
            # the part of the derivative hitting the coefficient cannot exceed its degree
            for coef0, a0 in _bounded_subindices(outer, bound):
                dc = d.diff_multi(a0) if any(a0) else d
                if dc.is_zero():
                    continue
                prod = list((c * dc).items())
                rest = tuple(e - a for e, a in zip(outer, a0))
                if l == 0:
                    if any(rest):
                        continue
                    splits = ((1, ()),)
                else:
                    splits = _leibniz_splits(rest, l)
                for coef, parts in splits:
                    new_key = head + tuple(tuple(x + y for x, y in zip(J, A))
                                           for J, A in zip(inner_key, parts)) + tail
                    slot = acc.setdefault(new_key, {})
                    f = coef0 * coef
                    for m, v in prod:
                        slot[m] = slot.get(m, 0) + v * f
    return Cochain._raw(phi.ctx, k + l - 1, _collect(phi.ctx.n, acc))


def pre_lie(phi: Cochain, psi: Cochain) -> Cochain:
    """phi o psi = sum_i (-1)^((i-1)(l-1)) phi o_i psi; zero when phi has arity 0."""
    k, l = phi.arity, psi.arity
    if k == 0:
        return Cochain.zero(phi.ctx, max(k + l - 1, 0))
    result = Cochain.zero(phi.ctx, k + l - 1)
    for i in range(1, k + 1):
        term = op_circ_i(phi, psi, i)
        result = result - term if (i - 1) * (l - 1) % 2 else result + term
    return result


def gerstenhaber_bracket(phi: Cochain, psi: Cochain) -> Cochain:
    k, l = phi.arity, psi.arity
    if k + l == 0:
        # [f, g] would have arity -1: the zero space
        return Cochain.zero(phi.ctx, 0)
    a = pre_lie(phi, psi)
    b = pre_lie(psi, phi)
    return a - b if (k - 1) * (l - 1) % 2 == 0 else a + b


def hochschild_b(phi: Cochain) -> Cochain:
    """Hochschild coboundary  b(phi) = -[phi, mu]_G."""
    return -gerstenhaber_bracket(phi, Cochain.mu(phi.ctx))


def hochschild_b_explicit(phi: Cochain) -> Cochain:
    """The same coboundary from the alternating-sum formula, expanded directly."""
    ctx = phi.ctx
    k = phi.arity
    z = (0,) * ctx.n
    out: dict = {}
    for key, c in phi.items():
        # f_1 phi(f_2, ..., f_{k+1})
        _accumulate(out, (z,) + key, c)
        # (-1)^r phi(..., f_r f_{r+1}, ...)
        for r in range(1, k + 1):
            idx = key[r - 1]
            sign = -1 if r % 2 else 1
            for coef, (A, B) in _leibniz_splits(idx, 2):
                new_key = key[:r - 1] + (A, B) + key[r:]
                _accumulate(out, new_key, c.scale(sign * coef))
        # (-1)^(k+1) phi(f_1..f_k) f_{k+1}
        _accumulate(out, key + (z,), c if (k + 1) % 2 == 0 else -c)
    return Cochain._raw(ctx, k + 1, out)


def cup_product(phi: Cochain, psi: Cochain) -> Cochain:
    if phi.ctx != psi.ctx:
        raise ValueError("cochains live in different contexts")
    out: dict = {}
    for k1, c1 in phi.items():
        for k2, c2 in psi.items():
            _accumulate(out, k1 + k2, c1 * c2)
    return Cochain._raw(phi.ctx, phi.arity + psi.arity, out)


def brace(e: Cochain, fs: Sequence[Cochain]) -> Cochain:
    """Brace operation E{F_1, ..., F_p}.

    Sum over order-preserving, non-overlapping insertions of the F's into
    the slots of E with sign (-1)^(sum_k i_k |F_k|), where i_k counts the
    arguments placed before F_k and |F| = arity - 1.  For p = 1 this is the
    pre-Lie product, whose antisymmetrisation is the Gerstenhaber bracket.
    """
    fs = list(fs)
    p = len(fs)
    if p < 1:
        raise ValueError("brace needs at least one inner cochain")
    m = e.arity
    out_arity = m + sum(f.arity for f in fs) - p
    if out_arity < 0:
        return Cochain.zero(e.ctx, 0)
    result = Cochain.zero(e.ctx, out_arity)
    for slots in combinations(range(m), p):
        exponent = 0
        shift = 0
        for s, f in zip(slots, fs):
            exponent += (s + shift) * (f.arity - 1)
            shift += f.arity - 1
        term = e
        # insert from the right so earlier slot numbers stay valid
        for s, f in reversed(list(zip(slots, fs))):
            term = op_circ_i(term, f, s + 1)
        result = result - term if exponent % 2 else result + term
    return result


def op_compatible(phi: Cochain) -> bool:
    """Membership in G_I: terms whose last slot differentiates transversally need coefficients in I."""
    ctx = phi.ctx
    if phi.arity == 0:
        return all(ctx.in_ideal(c) for c in phi._terms.values())
    return all(ctx.in_ideal(c) for key, c in phi.items()
               if ctx.touches_transverse(key[-1]))


def vanishes_on_constants(phi: Cochain) -> bool:
    """True when phi(..., 1, ...) = 0 in every slot, i.e. no slot carries the zero multi-index."""
    return all(all(sum(idx) > 0 for idx in key) for key in phi._terms)


def restricted_last_slot(phi: Cochain, fs: Sequence[Poly], g: Poly) -> Poly:
    """Xi(phi)(f_1..f_{k-1})(g): restrict phi(f_1, ..., f_{k-1}, g) to C, for g in I.

    Its kernel is exactly the compatible subspace.
    """
    return phi.ctx.restrict(op_apply(phi, list(fs) + [g]))


def quotient_coboundary_action(phi: Cochain, fs: Sequence[Poly], g: Poly) -> Poly:
    """(b~ Xi(phi))(f_1..f_k)(g) from the alternating formula on the quotient complex.

    Agrees with ``restricted_last_slot(hochschild_b(phi), fs, g)`` whenever g lies in I.
    """
    ctx = phi.ctx
    k = len(fs)
    if phi.arity != k:
        raise ValueError("need as many functions as the arity of phi")

    def xi(args, last):
        return restricted_last_slot(phi, args, last)

    total = ctx.restrict(fs[0]) * xi(fs[1:], g)
    for r in range(1, k):
        args = list(fs[:r - 1]) + [fs[r - 1] * fs[r]] + list(fs[r + 1:])
        term = xi(args, g)
        total = total - term if r % 2 else total + term
    last = xi(fs[:-1], fs[-1] * g)
    return total - last if k % 2 else total + last
