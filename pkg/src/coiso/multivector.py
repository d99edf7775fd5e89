"""Polynomial multivector fields on R^n and their Schouten calculus.

A multivector is stored as a map from strictly increasing direction tuples
(0-based coordinates) to nonzero coefficient polynomials.  Think of the
direction ``i`` as an odd variable theta_i standing for d/dx^i; the wedge
product is then the product of the Grassmann algebra.

Bracket convention
------------------
The Schouten bracket is normalised so that the classical HKR map
intertwines it with the Gerstenhaber bracket of Hochschild cochains in
cohomology::

    [X, Y] = sum_i  d_i Y ^ dL_i X  -  (-1)**((k-1)*(l-1)) d_i X ^ dL_i Y

where ``d_i`` differentiates coefficients by x^i and ``dL_i`` is the left
derivative in theta_i.  On vector fields this is the commutator, and
``[X, g] = i(dg) X`` contracts the first slot, e.g. ``[e1^e2, x1] = e2``.
The bracket is a derivation from the right:
``[X, Y^Z] = (-1)**((k-1)*m) [X,Y]^Z + Y^[X,Z]`` for ``Z`` of degree ``m``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Mapping, Sequence

from .polycore import CoisoContext, Poly, join_signed


def sort_sign(seq: Sequence[int]):
    """Return ``(sign, sorted_tuple)``; sign is 0 when an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    # bubble sort is fine for the tiny lengths involved
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


def merge_sign(s: tuple, t: tuple):
    """Sign and direction set of theta_S * theta_T (0 if they overlap)."""
    if set(s) & set(t):
        return 0, ()
    # count inversions between the two sorted blocks
    inv = 0
    for a in s:
        for b in t:
            if a > b:
                inv += 1
    return (-1) ** inv, tuple(sorted(s + t))


def _accumulate(out: dict, key, poly: Poly):
    if poly.is_zero():
        return
    cur = out.get(key)
    s = poly if cur is None else cur + poly
    if s.is_zero():
        out.pop(key, None)
    else:
        out[key] = s


class MultiVector:
    """Element of A (x) Lambda E with polynomial coefficients."""

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: CoisoContext, terms: Mapping[Sequence[int], Poly] | None = None):
        self.ctx = ctx
        out: dict = {}
        for dirs, coeff in (terms or {}).items():
            coeff = ctx.check(coeff)
            for d in dirs:
                if not 0 <= d < ctx.n:
                    raise IndexError(f"direction {d} out of range for n={ctx.n}")
            sign, key = sort_sign(dirs)
            if sign:
                _accumulate(out, key, coeff if sign > 0 else -coeff)
        self._terms = out

    @classmethod
    def _raw(cls, ctx, terms):
        mv = cls.__new__(cls)
        mv.ctx = ctx
        mv._terms = terms
        return mv

    @classmethod
    def scalar(cls, ctx: CoisoContext, f: Poly) -> "MultiVector":
        return cls(ctx, {(): f})

    @classmethod
    def basis(cls, ctx: CoisoContext, *dirs: int, coeff: Poly | None = None) -> "MultiVector":
        """``coeff * e_{dirs}`` with 0-based directions."""
        return cls(ctx, {tuple(dirs): ctx.const(1) if coeff is None else coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def degrees(self) -> set:
        return {len(s) for s in self._terms}

    def degree(self):
        """Degree if homogeneous and nonzero, else None."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def component(self, k: int) -> "MultiVector":
        return MultiVector._raw(self.ctx, {s: c for s, c in self._terms.items() if len(s) == k})

    def homogeneous_parts(self):
        for k in sorted(self.degrees()):
            yield k, self.component(k)

    def __eq__(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self._terms.items())))

    def __repr__(self):
        return f"MultiVector({self.format()!r})"

    def __str__(self):
        return self.format()

    def _same(self, other: "MultiVector"):
        if other.ctx != self.ctx:
            raise ValueError("multivectors live in different contexts")

    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._same(other)
        out = dict(self._terms)
        for s, c in other._terms.items():
            _accumulate(out, s, c)
        return MultiVector._raw(self.ctx, out)

    def __neg__(self):
        return MultiVector._raw(self.ctx, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "MultiVector":
        """Multiply by a rational number or by a coefficient polynomial."""
        if isinstance(c, Poly):
            out: dict = {}
            for s, p in self._terms.items():
                _accumulate(out, s, p * c)
            return MultiVector._raw(self.ctx, out)
        c = Fraction(c)
        if not c:
            return MultiVector._raw(self.ctx, {})
        return MultiVector._raw(self.ctx, {s: p.scale(c) for s, p in self._terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def wedge(self, other: "MultiVector") -> "MultiVector":
        self._same(other)
        out: dict = {}
        for s, f in self._terms.items():
            for t, g in other._terms.items():
                sign, key = merge_sign(s, t)
                if sign:
                    fg = f * g
                    _accumulate(out, key, fg if sign > 0 else -fg)
        return MultiVector._raw(self.ctx, out)

    __xor__ = wedge

    def diff_coeffs(self, i: int) -> "MultiVector":
        out = {}
        for s, f in self._terms.items():
            d = f.diff(i)
            if d:
                out[s] = d
        return MultiVector._raw(self.ctx, out)

    def left_derivative(self, i: int) -> "MultiVector":
        """Remove theta_i from the left: sign (-1)^(number of directions before i)."""
        out = {}
        for s, f in self._terms.items():
            if i in s:
                pos = s.index(i)
                out[s[:pos] + s[pos + 1:]] = f if pos % 2 == 0 else -f
        return MultiVector._raw(self.ctx, out)

    def format(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for s in sorted(self._terms, key=lambda s: (len(s), s)):
            wedge = "e[" + ",".join(str(d + 1) for d in s) + "]" if s else ""
            for m, c in self._terms[s].sorted_items():
                mono = "*".join(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                                for i, e in enumerate(m) if e)
                body = "*".join(p for p in (mono, wedge) if p)
                pieces.append((c, body))
        return join_signed(pieces)


def mv_wedge(x: MultiVector, y: MultiVector) -> MultiVector:
    return x.wedge(y)


def _schouten_homogeneous(x: MultiVector, k: int, y: MultiVector, l: int) -> MultiVector:
    ctx = x.ctx
    result = MultiVector._raw(ctx, {})
    sign = -1 if (k - 1) * (l - 1) % 2 else 1
    for i in range(ctx.n):
        dx_theta = x.left_derivative(i)
        dy_theta = y.left_derivative(i)
        if dx_theta:
            result = result + y.diff_coeffs(i).wedge(dx_theta)
        if dy_theta:
            term = x.diff_coeffs(i).wedge(dy_theta)
            result = result - term if sign > 0 else result + term
    return result


def schouten_bracket(x: MultiVector, y: MultiVector) -> MultiVector:
    """Schouten-Nijenhuis bracket, extended bilinearly over homogeneous parts."""
    x._same(y)
    result = MultiVector._raw(x.ctx, {})
    for k, xk in x.homogeneous_parts():
        for l, yl in y.homogeneous_parts():
            result = result + _schouten_homogeneous(xk, k, yl, l)
    return result


def mv_compatible(x: MultiVector) -> bool:
    """Membership in g_I: every purely transverse component has coefficient in I."""
    ctx = x.ctx
    return all(ctx.in_ideal(f) for s, f in x.items()
               if all(ctx.is_transverse(d) for d in s))


def _det(rows):
    """Leibniz-formula determinant of a small square matrix of Polys."""
    k = len(rows)
    if k == 0:
        return None
    total = None
    for perm in permutations(range(k)):
        sign, _ = sort_sign(perm)
        term = rows[0][perm[0]]
        for r in range(1, k):
            term = term * rows[r][perm[r]]
        term = term if sign > 0 else -term
        total = term if total is None else total + term
    return total


def pair_exact_forms(x: MultiVector, gs: Sequence[Poly]) -> Poly:
    """Full contraction of ``x`` against dg_1 ^ ... ^ dg_k.

    Uses the dual pairing <e_S, dg_1 ^ ... ^ dg_k> = det(d_{s_a} g_b), so that
    <e1^e2, dx1^dx2> = 1.  All components of ``x`` of degree other than
    ``len(gs)`` pair to zero.
    """
    ctx = x.ctx
    k = len(gs)
    for g in gs:
        ctx.check(g)
    degs = x.degrees()
    if degs and k not in degs:
        raise ValueError(f"arity mismatch: {k} forms against degrees {sorted(degs)}")
    if k == 0:
        return x.component(0)._terms.get((), ctx.zero())
    grads = [[g.diff(i) for i in range(ctx.n)] for g in gs]
    total = ctx.zero()
    for s, f in x.items():
        if len(s) != k:
            continue
        rows = [[grads[b][a] for b in range(k)] for a in s]
        total = total + f * _det(rows)
    return total


class QuotientMultiVector:
    """Element of B (x) Lambda E2: transverse directions, coefficients on C.

    Coefficients are kept as polynomials in the ambient variables that do
    not involve transverse coordinates, so the canonical lift is the identity
    on the term map.
    """

    __slots__ = ("ctx", "_terms")

    def __init__(self, ctx: CoisoContext, terms: Mapping[Sequence[int], Poly] | None = None):
        self.ctx = ctx
        out: dict = {}
        for dirs, coeff in (terms or {}).items():
            ctx.check(coeff)
            if not all(ctx.is_transverse(d) for d in dirs):
                raise ValueError(f"direction set {dirs} is not transverse")
            if any(coeff.uses_var(i) for i in ctx.transverse):
                raise ValueError("quotient coefficients may only use tangential variables")
            sign, key = sort_sign(dirs)
            if sign:
                _accumulate(out, key, coeff if sign > 0 else -coeff)
        self._terms = out

    @classmethod
    def from_multivector(cls, x: MultiVector) -> "QuotientMultiVector":
        return cls(x.ctx, x.terms)

    def items(self):
        return self._terms.items()

    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, QuotientMultiVector):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __add__(self, other):
        out = dict(self._terms)
        for s, c in other._terms.items():
            _accumulate(out, s, c)
        q = QuotientMultiVector.__new__(QuotientMultiVector)
        q.ctx, q._terms = self.ctx, out
        return q

    def lift(self) -> MultiVector:
        return MultiVector(self.ctx, self._terms)

    def format(self) -> str:
        return self.lift().format()

    def __repr__(self):
        return f"QuotientMultiVector({self.format()!r})"

    def __str__(self):
        return self.format()


def mv_project_psi(x: MultiVector) -> QuotientMultiVector:
    """Drop terms with a tangential direction and restrict coefficients to C."""
    ctx = x.ctx
    out = {}
    for s, f in x.items():
        if all(ctx.is_transverse(d) for d in s):
            r = ctx.restrict(f)
            if r:
                out[s] = r
    q = QuotientMultiVector.__new__(QuotientMultiVector)
    q.ctx, q._terms = ctx, out
    return q


def brst_differential(p: MultiVector, a: QuotientMultiVector,
                      lift: MultiVector | None = None) -> QuotientMultiVector:
    """BRST differential of the compatible bivector ``p`` on B (x) Lambda E2.

    ``lift`` optionally replaces the canonical section; any element of
    ``a.lift() + g_I`` gives the same answer.
    """
    if p.degrees() - {2}:
        raise ValueError("the BRST differential needs a bivector")
    if not mv_compatible(p):
        raise ValueError("bivector is not compatible with C")
    y = a.lift() if lift is None else lift
    return mv_project_psi(schouten_bracket(p, y))
