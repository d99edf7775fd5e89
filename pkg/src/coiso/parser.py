"""Text grammar for polynomials, multivectors, cochains and resolution chains.

Grammar::

    expr    := ['+' | '-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := int ['/' int]
             | name ['^' int]
             | 'e' '[' [int (',' int)*] ']'
             | 'D' '[' [midx ('|' midx)*] ']'
             | '(' expr ')' ['^' int]
    midx    := '(' int (',' int)* ')'

A term holds at most one ``e[...]`` or ``D[...]`` factor; a term without
one is a scalar (degree 0 multivector, arity 0 cochain).  Parenthesised
sub-expressions must be polynomials.  Variable names are ``x1 .. xn`` for
functions on R^n; bar chains use ``a<i>``, ``x<i>_<r>``, ``b<i>`` and Koszul
chains use ``a<i>``, ``b<i>`` (coordinate ``i``, middle block ``r``).

Printing is the ``format`` method of each value; ``parse(print(v)) == v``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .hochschild import Cochain
from .multivector import MultiVector
from .polycore import CoisoContext, Poly
from .resolutions import BarChain, KoszulChain, block_names

FACTOR_START = frozenset({"number", "variable", "("})


class ParseError(ValueError):
    """Syntax or range error at a byte offset of the source text."""

    def __init__(self, message: str, offset: int, expected=frozenset()):
        self.message = message
        self.offset = offset
        self.expected = frozenset(expected)
        text = f"{message} at byte {offset}"
        if self.expected:
            text += "; expected one of: " + ", ".join(sorted(self.expected))
        super().__init__(text)


class _Parser:
    def __init__(self, src: str, names: Mapping[str, int], n: int, ops: frozenset):
        self.src = src
        self.pos = 0
        self.names = dict(names)
        self.nvars = len(self.names)
        self.n = n
        self.ops = ops  # subset of {"e", "D"}
        self.term_offsets: dict = {}  # first byte offset of a term per operator symbol
        self.factor_start = FACTOR_START | {f"{o}[" for o in ops}

    # low-level scanning

    def offset(self, pos=None) -> int:
        pos = self.pos if pos is None else pos
        return len(self.src[:pos].encode("utf-8"))

    def error(self, message, expected=frozenset(), pos=None):
        raise ParseError(message, self.offset(pos), expected)

    def skip(self):
        while self.pos < len(self.src) and self.src[self.pos] in " \t\r\n":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            got = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"unexpected {got}", {ch})
        self.pos += 1

    def integer(self, what="number") -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit() and self.src[self.pos].isascii():
            self.pos += 1
        if start == self.pos:
            got = repr(self.peek()) if self.peek() else "end of input"
            self.error(f"unexpected {got}", {what})
        return int(self.src[start:self.pos])

    def identifier(self) -> str:
        start = self.pos
        while self.pos < len(self.src) and (self.src[self.pos].isascii()
                                            and (self.src[self.pos].isalnum()
                                                 or self.src[self.pos] == "_")):
            self.pos += 1
        return self.src[start:self.pos]

    # grammar

    def parse(self) -> dict:
        result = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}", {"+", "-", "*", "end of input"})
        return result

    def expr(self) -> dict:
        """Map from operator symbol (None, ('e', dirs) or ('D', slots)) to coefficient."""
        out: dict = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            op, coeff = self.term()
            coeff = coeff if sign > 0 else -coeff
            out[op] = out[op] + coeff if op in out else coeff
            ch = self.peek()
            if ch in ("+", "-"):
                sign = -1 if ch == "-" else 1
                self.pos += 1
                continue
            return out

    def term(self):
        coeff = Poly.const(self.nvars, 1)
        op = None
        self.skip()
        term_start = self.pos
        while True:
            self.skip()
            start = self.pos
            kind, value = self.factor()
            if kind == "poly":
                coeff = coeff * value
            else:
                if op is not None:
                    self.error("a term may hold only one e[...] or D[...] factor", pos=start)
                op = value
            if self.peek() == "*":
                self.pos += 1
                continue
            self.term_offsets.setdefault(op, self.offset(term_start))
            return op, coeff

    def factor(self):
        ch = self.peek()
        if not ch:
            self.error("unexpected end of input", self.factor_start)
        if ch.isdigit() and ch.isascii():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                slash = self.pos
                den = self.integer()
                if den == 0:
                    self.error("division by zero", pos=slash)
                return "poly", Poly.const(self.nvars, Fraction(num, den))
            return "poly", Poly.const(self.nvars, num)
        if ch == "(":
            self.pos += 1
            start = self.pos
            inner = self.expr()
            self.expect(")")
            if any(op is not None for op in inner):
                self.error("e[...] and D[...] are not allowed inside parentheses", pos=start)
            value = inner.get(None, Poly.zero(self.nvars))
            if self.peek() == "^":
                self.pos += 1
                value = value ** self.integer("exponent")
            return "poly", value
        if ch.isascii() and ch.isalpha():
            start = self.pos
            name = self.identifier()
            if name in ("e", "D") and self.peek() == "[":
                if name not in self.ops:
                    allowed = sorted(f"{o}[" for o in self.ops)
                    self.error(f"{name}[...] is not allowed here", set(allowed) or {"variable"},
                               pos=start)
                self.pos += 1
                return "op", self.wedge() if name == "e" else self.slots()
            if name not in self.names:
                self.error(f"unknown variable {name!r}", {"variable"}, pos=start)
            value = Poly.var(self.nvars, self.names[name])
            if self.peek() == "^":
                self.pos += 1
                value = value ** self.integer("exponent")
            return "poly", value
        self.error(f"unexpected {ch!r}", self.factor_start)

    def wedge(self):
        dirs = []
        if self.peek() != "]":
            while True:
                self.skip()
                at = self.pos
                d = self.integer("direction")
                if not 1 <= d <= self.n:
                    self.error(f"direction {d} out of range 1..{self.n}", pos=at)
                dirs.append(d - 1)
                if self.peek() == ",":
                    self.pos += 1
                    continue
                break
        self.expect("]")
        return ("e", tuple(dirs))

    def slots(self):
        slots = []
        if self.peek() != "]":
            while True:
                slots.append(self.multi_index())
                if self.peek() == "|":
                    self.pos += 1
                    continue
                break
        self.expect("]")
        return ("D", tuple(slots))

    def multi_index(self):
        self.skip()
        at = self.pos
        self.expect("(")
        entries = []
        while True:
            entries.append(self.integer("exponent"))
            if self.peek() == ",":
                self.pos += 1
                continue
            break
        self.expect(")")
        if len(entries) != self.n:
            self.error(f"multi-index has {len(entries)} entries, expected {self.n}", pos=at)
        return tuple(entries)


def coordinate_names(n: int) -> dict:
    return {f"x{i + 1}": i for i in range(n)}


def parse_poly(src: str, ctx: CoisoContext) -> Poly:
    terms = _Parser(src, coordinate_names(ctx.n), ctx.n, frozenset()).parse()
    return terms.get(None, ctx.zero())


def parse_multivector(src: str, ctx: CoisoContext) -> MultiVector:
    terms = _Parser(src, coordinate_names(ctx.n), ctx.n, frozenset({"e"})).parse()
    out = {}
    for op, coeff in terms.items():
        dirs = () if op is None else op[1]
        out[dirs] = out[dirs] + coeff if dirs in out else coeff
    return _sum_terms(MultiVector, ctx, out)


def _sum_terms(cls, ctx, out):
    # repeated directions collapse to zero inside the constructor; add term by term
    total = cls(ctx, {})
    for dirs, coeff in out.items():
        total = total + cls(ctx, {dirs: coeff})
    return total


def parse_cochain(src: str, ctx: CoisoContext) -> Cochain:
    p = _Parser(src, coordinate_names(ctx.n), ctx.n, frozenset({"D"}))
    terms = p.parse()
    arity = _common_degree(p, terms, "cochain terms")
    return Cochain(ctx, arity, {(() if op is None else op[1]): c for op, c in terms.items()})


def _arity(op):
    return 0 if op is None else len(op[1])


def _common_degree(p: _Parser, terms: dict, what: str, ops=None) -> int:
    """The shared slot count of all terms, else a located error at the first outlier."""
    ops = sorted(terms if ops is None else ops, key=lambda op: p.term_offsets[op])
    first = _arity(ops[0])
    for op in ops[1:]:
        if _arity(op) != first:
            raise ParseError(f"{what} of mixed degree {first} and {_arity(op)}",
                             p.term_offsets[op])
    return first


def parse_expr(src: str, kind: str, ctx: CoisoContext):
    if kind == "poly":
        return parse_poly(src, ctx)
    if kind == "multivector":
        return parse_multivector(src, ctx)
    if kind == "cochain":
        return parse_cochain(src, ctx)
    raise ValueError(f"unknown expression kind {kind!r}")


def print_expr(value) -> str:
    return value.format()


def _bar_names(n: int, k: int) -> dict:
    return {name: i for i, name in enumerate(block_names(n, k))}


def parse_bar_chain(src: str, n: int, k: int | None = None) -> BarChain:
    """Parse a bar chain; the degree defaults to the largest middle block mentioned."""
    if k is None:
        k = 0
        for name in _identifiers(src):
            if name.startswith("x") and "_" in name:
                tail = name.split("_", 1)[1]
                if tail.isdigit():
                    k = max(k, int(tail))
    terms = _Parser(src, _bar_names(n, k), n, frozenset()).parse()
    return BarChain(n, k, terms.get(None, Poly.zero((k + 2) * n)))


def parse_koszul_chain(src: str, n: int, k: int | None = None) -> KoszulChain:
    p = _Parser(src, _bar_names(n, 0), n, frozenset({"e"}))
    terms = p.parse()
    nonzero = [op for op, c in terms.items() if c]
    # a zero coefficient still fixes the degree, as in the printed form 0*e[1,2]
    found = _common_degree(p, terms, "Koszul terms", nonzero or None)
    if k is None:
        k = found
    elif nonzero and found != k:
        raise ParseError(f"Koszul chain has degree {found}, expected {k}", 0)
    total = KoszulChain(n, k, {})
    for op, c in terms.items():
        dirs = () if op is None else op[1]
        if c:
            total = total + KoszulChain(n, k, {dirs: c})
    return total


def _identifiers(src: str):
    word = []
    for ch in src + " ":
        if ch.isascii() and (ch.isalnum() or ch == "_"):
            word.append(ch)
        elif word:
            yield "".join(word)
            word = []
