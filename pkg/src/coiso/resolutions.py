"""Bar and Koszul resolutions of A over A^e = A (x) A.

A bar chain of degree k is a polynomial F(a, x_1, ..., x_k, b) in (k+2)*n
variables.  Variable ``block*n + i`` is coordinate ``i`` (0-based) of block
``block``; block 0 is ``a``, blocks 1..k are the middle points ``x_r`` and
block k+1 is ``b``.  In text these variables are written ``a<i>``,
``x<i>_<r>`` and ``b<i>`` with 1-based coordinate ``i``.

A Koszul chain of degree k is a sum of ``p(a, b) e^S`` over increasing
k-element direction sets S, with p a polynomial in 2n variables (a, then b).
Degrees above n are allowed but only hold zero.
"""
from __future__ import annotations

from itertools import permutations
from typing import Mapping, Sequence

from .multivector import merge_sign, sort_sign
from .polycore import Poly, format_monomial, integrate_poly, join_signed


def block_names(n: int, k: int) -> list:
    names = [f"a{i + 1}" for i in range(n)]
    for r in range(1, k + 1):
        names += [f"x{i + 1}_{r}" for i in range(n)]
    return names + [f"b{i + 1}" for i in range(n)]


class BarChain:
    __slots__ = ("n", "k", "value")

    def __init__(self, n: int, k: int, value: Poly):
        if k < 0:
            raise ValueError("bar chains have degree >= 0")
        if value.nvars != (k + 2) * n:
            raise ValueError(f"a degree-{k} bar chain needs {(k + 2) * n} variables, "
                             f"got {value.nvars}")
        self.n, self.k, self.value = n, k, value

    @classmethod
    def zero(cls, n: int, k: int) -> "BarChain":
        return cls(n, k, Poly.zero((k + 2) * n))

    def var(self, block: int, i: int) -> Poly:
        return Poly.var((self.k + 2) * self.n, block * self.n + i)

    def is_zero(self):
        return self.value.is_zero()

    def __eq__(self, other):
        if not isinstance(other, BarChain):
            return NotImplemented
        return (self.n, self.k, self.value) == (other.n, other.k, other.value)

    def __hash__(self):
        return hash((self.n, self.k, self.value))

    def _same(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("bar chains of different shape")

    def __add__(self, other):
        self._same(other)
        return BarChain(self.n, self.k, self.value + other.value)

    def __sub__(self, other):
        self._same(other)
        return BarChain(self.n, self.k, self.value - other.value)

    def __neg__(self):
        return BarChain(self.n, self.k, -self.value)

    def format(self) -> str:
        return self.value.format(block_names(self.n, self.k))

    def __repr__(self):
        return f"BarChain(k={self.k}, {self.format()!r})"

    __str__ = format


class KoszulChain:
    __slots__ = ("n", "k", "_terms")

    def __init__(self, n: int, k: int, terms: Mapping[Sequence[int], Poly] | None = None):
        if k < 0:
            raise ValueError("Koszul chains have degree >= 0")
        self.n, self.k = n, k
        out: dict = {}
        for dirs, p in (terms or {}).items():
            if len(dirs) != k:
                raise ValueError(f"direction set {tuple(dirs)} does not have {k} entries")
            if p.nvars != 2 * n:
                raise ValueError(f"Koszul coefficients need {2 * n} variables")
            if any(not 0 <= d < n for d in dirs):
                raise IndexError(f"direction out of range in {tuple(dirs)}")
            sign, key = sort_sign(dirs)
            if sign:
                _acc(out, key, p if sign > 0 else -p)
        self._terms = out

    @classmethod
    def _raw(cls, n, k, terms):
        c = cls.__new__(cls)
        c.n, c.k, c._terms = n, k, terms
        return c

    @classmethod
    def scalar(cls, n: int, p: Poly) -> "KoszulChain":
        return cls(n, 0, {(): p})

    def items(self):
        return self._terms.items()

    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, KoszulChain):
            return NotImplemented
        return (self.n, self.k, self._terms) == (other.n, other.k, other._terms)

    def __hash__(self):
        return hash((self.n, self.k, frozenset(self._terms.items())))

    def _same(self, other):
        if (self.n, self.k) != (other.n, other.k):
            raise ValueError("Koszul chains of different shape")

    def __add__(self, other):
        self._same(other)
        out = dict(self._terms)
        for s, p in other._terms.items():
            _acc(out, s, p)
        return KoszulChain._raw(self.n, self.k, out)

    def __neg__(self):
        return KoszulChain._raw(self.n, self.k, {s: -p for s, p in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def format(self) -> str:
        if not self._terms:
            if 0 < self.k <= self.n:
                return "0*e[" + ",".join(str(d + 1) for d in range(self.k)) + "]"
            return "0"
        names = block_names(self.n, 0)
        pieces = []
        for s in sorted(self._terms):
            wedge = "e[" + ",".join(str(d + 1) for d in s) + "]" if s else ""
            for m, c in self._terms[s].sorted_items():
                body = "*".join(p for p in (format_monomial(m, names), wedge) if p)
                pieces.append((c, body))
        return join_signed(pieces)

    def __repr__(self):
        return f"KoszulChain(k={self.k}, {self.format()!r})"

    __str__ = format


def _acc(out, key, p):
    if p.is_zero():
        return
    s = out[key] + p if key in out else p
    if s.is_zero():
        out.pop(key, None)
    else:
        out[key] = s


def _block_map(n: int, blocks: Sequence[int]) -> list:
    """Variable renaming sending old block j to new block ``blocks[j]``."""
    return [blocks[j] * n + i for j in range(len(blocks)) for i in range(n)]


# bar complex

def bar_boundary(c: BarChain) -> BarChain:
    """Alternating sum of the k+1 diagonal substitutions merging neighbouring blocks."""
    n, k = c.n, c.k
    if k < 1:
        raise ValueError("the bar boundary starts in degree 1; use augmentation in degree 0")
    total = Poly.zero((k + 1) * n)
    for r in range(k + 1):
        # blocks r and r+1 collapse onto new block r
        blocks = [j if j <= r else j - 1 for j in range(k + 2)]
        term = c.value.remap((k + 1) * n, _block_map(n, blocks))
        total = total - term if r % 2 else total + term
    return BarChain(n, k - 1, total)


def augmentation(c) -> Poly:
    """F(a, b) -> F(x, x) on degree-0 chains of either complex."""
    if c.k != 0:
        raise ValueError("augmentation is defined on degree-0 chains only")
    if isinstance(c, KoszulChain):
        value = c._terms.get((), Poly.zero(2 * c.n))
    else:
        value = c.value
    return value.remap(c.n, _block_map(c.n, [0, 0]))


def bar_prolong(n: int, f: Poly) -> BarChain:
    """h^{-1}: view f(a) as a degree-0 chain that ignores b."""
    if f.nvars != n:
        raise ValueError(f"expected a polynomial in {n} variables")
    return BarChain(n, 0, f.extend(2 * n))


def bar_homotopy(c: BarChain) -> BarChain:
    """(h F)(a, x_1..x_{k+1}, b) = (-1)^(k+1) F(a, x_1, ..., x_{k+1})."""
    n, k = c.n, c.k
    # old b becomes the new last middle block; the new b is unused
    value = c.value.remap((k + 3) * n, _block_map(n, list(range(k + 2))))
    return BarChain(n, k + 1, value if k % 2 else -value)


def bar_act(f: Poly, c: BarChain) -> BarChain:
    """Module action of f(a, b) in A^e on a bar chain."""
    n, k = c.n, c.k
    if f.nvars != 2 * n:
        raise ValueError(f"A^e elements need {2 * n} variables")
    g = f.remap((k + 2) * n, _block_map(n, [0, k + 1]))
    return BarChain(n, k, g * c.value)


# Koszul complex

def koszul_prolong(n: int, f: Poly) -> KoszulChain:
    return KoszulChain.scalar(n, bar_prolong(n, f).value)


def koszul_boundary(c: KoszulChain) -> KoszulChain:
    """Contraction with xi(a, b) = a - b."""
    n, k = c.n, c.k
    if k < 1:
        raise ValueError("the Koszul boundary starts in degree 1; use augmentation in degree 0")
    out: dict = {}
    for s, p in c.items():
        for m, d in enumerate(s):
            xi = Poly.var(2 * n, d) - Poly.var(2 * n, n + d)
            term = p * xi
            _acc(out, s[:m] + s[m + 1:], term if m % 2 == 0 else -term)
    return KoszulChain._raw(n, k - 1, out)


def koszul_homotopy(c: KoszulChain) -> KoszulChain:
    """h omega = -sum_j e^j ^ int_0^1 t^k d omega/db^j (a, t b + (1-t) a) dt."""
    n, k = c.n, c.k
    m = 2 * n + 1
    t = Poly.var(m, 2 * n)
    tk = t ** k
    line = {n + j: t * Poly.var(m, n + j) + (1 - t) * Poly.var(m, j) for j in range(n)}
    out: dict = {}
    for s, p in c.items():
        pe = p.extend(m)
        for j in range(n):
            if j in s:
                continue
            d = pe.diff(n + j)
            if d.is_zero():
                continue
            integrand = d.substitute(line) * tk
            value = integrate_poly(integrand, 2 * n, 0, 1).truncate(2 * n)
            sign, key = merge_sign((j,), s)
            _acc(out, key, value if sign < 0 else -value)
    return KoszulChain._raw(n, k + 1, out)


def koszul_act(f: Poly, c: KoszulChain) -> KoszulChain:
    if f.nvars != 2 * c.n:
        raise ValueError(f"A^e elements need {2 * c.n} variables")
    out: dict = {}
    for s, p in c.items():
        _acc(out, s, f * p)
    return KoszulChain._raw(c.n, c.k, out)


# comparison maps

def map_F(c: KoszulChain) -> BarChain:
    """(F omega)(a, x_1..x_k, b) = omega(a, b)(x_1 - a, ..., x_k - a)."""
    n, k = c.n, c.k
    nv = (k + 2) * n
    ab = _block_map(n, [0, k + 1])
    total = Poly.zero(nv)
    for s, p in c.items():
        coeff = p.remap(nv, ab)
        if k == 0:
            total = total + coeff
            continue
        # det[(x_r - a)^{s_m}] over rows r, columns m
        rows = [[Poly.var(nv, r * n + d) - Poly.var(nv, d) for d in s] for r in range(1, k + 1)]
        det = Poly.zero(nv)
        for perm in permutations(range(k)):
            sign, _ = sort_sign(perm)
            term = Poly.const(nv, sign)
            for r in range(k):
                term = term * rows[r][perm[r]]
            det = det + term
        total = total + coeff * det
    return BarChain(n, k, total)


def map_G(c: BarChain) -> KoszulChain:
    """Iterated simplex integral of the mixed middle-block derivatives.

    x_r is placed at t_r a + (1 - t_r) b with 1 >= t_1 >= ... >= t_k >= 0.
    """
    n, k = c.n, c.k
    if k == 0:
        return KoszulChain.scalar(n, c.value)
    nv = (k + 2) * n
    m = nv + k  # t_1..t_k appended after the block variables
    value = c.value.extend(m)
    ts = [Poly.var(m, nv + r) for r in range(k)]
    line = {}
    for r in range(1, k + 1):
        t = ts[r - 1]
        for i in range(n):
            a = Poly.var(m, i)
            b = Poly.var(m, (k + 1) * n + i)
            line[r * n + i] = t * a + (1 - t) * b
    out: dict = {}
    for dirs in permutations(range(n), k):
        index = [0] * m
        for r, i in enumerate(dirs, start=1):
            index[r * n + i] = 1
        d = value.diff_multi(tuple(index))
        if d.is_zero():
            continue
        g = d.substitute(line)
        for r in range(k - 1, 0, -1):
            g = integrate_poly(g, nv + r, 0, ts[r - 1])
        g = integrate_poly(g, nv, 0, 1)
        if g.is_zero():
            continue
        g = g.remap(2 * n, _ab_projection(n, k, m))
        sign, key = sort_sign(dirs)
        _acc(out, key, g if sign > 0 else -g)
    return KoszulChain._raw(n, k, out)


def _ab_projection(n, k, m):
    # a block stays, b block moves next to it; middle blocks and t's no longer occur
    mapping = []
    for j in range(m):
        if j < n:
            mapping.append(j)
        elif (k + 1) * n <= j < (k + 2) * n:
            mapping.append(j - k * n)
        else:
            mapping.append(0)
    return mapping


def theta(c: BarChain) -> BarChain:
    """The projection F o G of the bar complex onto the image of the Koszul complex."""
    return map_F(map_G(c))
