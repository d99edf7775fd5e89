"""Exact sparse multivariate polynomials over the rationals.

Polynomials stand in for smooth functions on R^n.  Every identity checked by
this package is a coefficient-wise polynomial identity, so the polynomial
subalgebra is a faithful test bed and all comparisons are exact.

Variables are addressed by 0-based position.  The coordinate ``x1`` of the
text grammar is variable 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction
MultiIndex = tuple  # tuple[int, ...] of non-negative exponents


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"cannot use {c!r} as an exact rational")


def grlex_key(m: MultiIndex):
    """Sort key: higher total degree first, then lexicographically larger first."""
    return (-sum(m), tuple(-e for e in m))


def order(m: MultiIndex) -> int:
    return sum(m)


def madd(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


def unit_index(n: int, i: int, power: int = 1) -> MultiIndex:
    return tuple(power if j == i else 0 for j in range(n))


class Poly:
    """Immutable polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples of length ``nvars`` to nonzero Fractions.
    Two polynomials are equal iff they have the same number of variables and
    the same term map.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != nvars:
                    raise ValueError(f"exponent {m} does not have {nvars} entries")
                if any(e < 0 for e in m):
                    raise ValueError(f"negative exponent in {m}")
                c = to_fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Poly":
        # trusted constructor: keys are tuples of the right length, values nonzero
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c=1) -> "Poly":
        c = to_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1) -> "Poly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable {i} out of range for {nvars} variables")
        return cls._raw(nvars, {unit_index(nvars, i, power): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], c=1) -> "Poly":
        return cls(len(exponents), {tuple(exponents): c})

    # basic accessors

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def uses_var(self, i: int) -> bool:
        return any(m[i] for m in self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self.nvars}, {self.format()!r})"

    def __str__(self):
        return self.format()

    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(
                    f"dimension mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = to_fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(self.nvars, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus

    def diff(self, i: int, times: int = 1) -> "Poly":
        """Formal partial derivative in variable ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable {i} out of range for {self.nvars} variables")
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e < times:
                continue
            f = 1
            for j in range(times):
                f *= e - j
            mm = m[:i] + (e - times,) + m[i + 1:]
            out[mm] = c * f
        return Poly._raw(self.nvars, out)

    def diff_multi(self, index: MultiIndex) -> "Poly":
        """Apply d^|I| / dx^I for a full multi-index ``index``."""
        out = {}
        for m, c in self._terms.items():
            f = 1
            for e, p in zip(m, index):
                if e < p:
                    f = 0
                    break
                for j in range(p):
                    f *= e - j
            if f:
                out[tuple(e - p for e, p in zip(m, index))] = c * f
        return Poly._raw(self.nvars, out)

    def diff_block(self, offset: int, index: MultiIndex) -> "Poly":
        """Multi-index derivative acting on variables ``offset .. offset+len(index)-1``."""
        full = (0,) * offset + tuple(index) + (0,) * (self.nvars - offset - len(index))
        return self.diff_multi(full)

    # substitution and renaming

    def remap(self, nvars: int, mapping: Sequence[int]) -> "Poly":
        """Rename variable ``j`` to ``mapping[j]`` in a ring with ``nvars`` variables.

        Several variables may be sent to the same target (diagonal substitution).
        """
        if len(mapping) != self.nvars:
            raise ValueError("mapping must cover every variable")
        out: dict = {}
        for m, c in self._terms.items():
            mm = [0] * nvars
            for j, e in enumerate(m):
                if e:
                    mm[mapping[j]] += e
            key = tuple(mm)
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return Poly._raw(nvars, out)

    def extend(self, nvars: int) -> "Poly":
        """Embed into a ring with more variables appended at the end."""
        if nvars < self.nvars:
            raise ValueError("cannot extend to fewer variables")
        pad = (0,) * (nvars - self.nvars)
        return Poly._raw(nvars, {m + pad: c for m, c in self._terms.items()})

    def truncate(self, nvars: int) -> "Poly":
        """Drop trailing variables, which must not occur."""
        for m in self._terms:
            if any(m[nvars:]):
                raise ValueError("polynomial depends on a dropped variable")
        return Poly._raw(nvars, {m[:nvars]: c for m, c in self._terms.items()})

    def substitute(self, values: Mapping[int, "Poly"]) -> "Poly":
        """Replace variable ``i`` by ``values[i]`` (Polys over the same ring)."""
        for v in values.values():
            if v.nvars != self.nvars:
                raise ValueError("substituted polynomials must live in the same ring")
        powers: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = values[i] ** e
            return powers[key]

        result = Poly.zero(self.nvars)
        for m, c in self._terms.items():
            keep = tuple(0 if i in values else e for i, e in enumerate(m))
            term = Poly._raw(self.nvars, {keep: c})
            for i, e in enumerate(m):
                if e and i in values:
                    term = term * power(i, e)
            result = result + term
        return result

    def set_zero(self, indices: Iterable[int]) -> "Poly":
        """Substitute 0 for every variable in ``indices``."""
        idx = set(indices)
        return Poly._raw(self.nvars, {m: c for m, c in self._terms.items()
                                      if not any(m[i] for i in idx)})

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    # text

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        if names is None:
            names = [f"x{i + 1}" for i in range(self.nvars)]
        pieces = []
        for m, c in self.sorted_items():
            body = format_monomial(m, names)
            pieces.append((c, body))
        return join_signed(pieces)


def format_monomial(m: MultiIndex, names: Sequence[str]) -> str:
    return "*".join(names[i] if e == 1 else f"{names[i]}^{e}"
                    for i, e in enumerate(m) if e)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def join_signed(pieces) -> str:
    """Join ``(coefficient, body)`` pairs into ``a*body - b*body2 ...`` text.

    An empty body means a bare scalar.
    """
    out = []
    for n, (c, body) in enumerate(pieces):
        mag = abs(c)
        if not body:
            text = format_rational(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{format_rational(mag)}*{body}"
        if n == 0:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append((" - " if c < 0 else " + ") + text)
    return "".join(out)


@dataclass(frozen=True)
class CoisoContext:
    """Ambient R^n with the coisotropic subspace C = {x'' = 0} of codimension nu.

    Coordinates 0 .. n-nu-1 are tangential (block E1), the last ``nu`` are
    transverse (block E2).
    """

    n: int
    nu: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.nu <= self.n:
            raise ValueError(f"need 0 <= nu <= n, got n={self.n}, nu={self.nu}")

    @property
    def tangential(self) -> range:
        return range(self.n - self.nu)

    @property
    def transverse(self) -> range:
        return range(self.n - self.nu, self.n)

    def is_transverse(self, i: int) -> bool:
        if not 0 <= i < self.n:
            raise IndexError(f"coordinate {i} out of range for n={self.n}")
        return i >= self.n - self.nu

    def touches_transverse(self, index: MultiIndex) -> bool:
        return any(index[i] for i in self.transverse)

    def x(self, i: int) -> Poly:
        """The coordinate function named ``x<i>`` (1-based, as in the text grammar)."""
        return Poly.var(self.n, i - 1)

    def const(self, c=1) -> Poly:
        return Poly.const(self.n, c)

    def zero(self) -> Poly:
        return Poly.zero(self.n)

    def check(self, p: Poly) -> Poly:
        if p.nvars != self.n:
            raise ValueError(f"dimension mismatch: expected {self.n} variables, got {p.nvars}")
        return p

    def restrict(self, p: Poly) -> Poly:
        """Pull back to C: set every transverse coordinate to zero."""
        return self.check(p).set_zero(self.transverse)

    def in_ideal(self, p: Poly) -> bool:
        """Membership in the vanishing ideal of C (generated by the transverse coordinates)."""
        return self.restrict(p).is_zero()


# operation-level aliases

def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_partial(a: Poly, i: int) -> Poly:
    """Partial derivative with respect to coordinate ``i`` (1-based)."""
    if not 1 <= i <= a.nvars:
        raise IndexError(f"coordinate index {i} out of range 1..{a.nvars}")
    return a.diff(i - 1)


def restrict_to_C(ctx: CoisoContext, a: Poly) -> Poly:
    return ctx.restrict(a)


def in_ideal(ctx: CoisoContext, a: Poly) -> bool:
    return ctx.in_ideal(a)


def integrate_poly(a: Poly, var: int, lower, upper) -> Poly:
    """Definite integral of ``a`` in variable ``var`` between polynomial bounds.

    The bounds must not depend on ``var``.  The result no longer depends on
    ``var`` and has all-rational coefficients.
    """
    lower = a._coerce(lower)
    upper = a._coerce(upper)
    if lower.uses_var(var) or upper.uses_var(var):
        raise ValueError("integration bounds may not depend on the integration variable")
    anti: dict = {}
    for m, c in a.items():
        e = m[var]
        mm = m[:var] + (e + 1,) + m[var + 1:]
        anti[mm] = c / (e + 1)
    F = Poly._raw(a.nvars, anti)
    return F.substitute({var: upper}) - F.substitute({var: lower})
