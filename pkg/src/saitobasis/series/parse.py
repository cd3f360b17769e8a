"""Input language for polynomials in ``x, y`` or ``t``.

Grammar (whitespace is ignored)::

    expr   := ['+' | '-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' INT)?
    base   := INT ['/' INT] | VAR | '(' expr ')'

Products must be written with ``*``; exponents are nonnegative integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ExprSyntaxError, UnknownVariable
from .core import BiSeries, TSeries


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Add:
    terms: tuple


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text):
    toks = []
    pos = 0
    n = len(text.rstrip())
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            toks.append(("INT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("VAR", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*^/()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(3), text)
            toks.append((ch, ch, m.start(3)))
        pos = m.end()
    toks.append(("END", "", n))
    return toks


class _Parser:
    def __init__(self, text, allowed):
        self.text = text
        self.allowed = allowed
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            want = "integer" if kind == "INT" else repr(kind)
            raise ExprSyntaxError(f"expected {want}", tok[2], self.text)
        self.k += 1
        return tok

    def expr(self):
        terms = []
        sign = "+"
        if self.peek()[0] in ("+", "-"):
            sign = self.take()[0]
        while True:
            t = self.term()
            terms.append(Neg(t) if sign == "-" else t)
            kind = self.peek()[0]
            if kind in ("+", "-"):
                sign = self.take()[0]
                continue
            break
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.peek()[0] == "*":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise ExprSyntaxError("negative exponent", tok[2], self.text)
            exp = int(self.take("INT")[1])
            return Pow(base, exp)
        return base

    def base(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "INT":
            self.take()
            num = int(tok[1])
            if self.peek()[0] == "/":
                slash = self.take()
                den = int(self.take("INT")[1])
                if den == 0:
                    raise ExprSyntaxError("zero denominator", slash[2], self.text)
                return Num(Fraction(num, den))
            return Num(Fraction(num))
        if kind == "VAR":
            self.take()
            if tok[1] not in self.allowed:
                raise UnknownVariable(f"variable {tok[1]!r} at position {tok[2]} not in {sorted(self.allowed)}")
            return Var(tok[1])
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "END":
            raise ExprSyntaxError("unexpected end of input", tok[2], self.text)
        raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2], self.text)


def parse_expr(text, allowed_vars=("x", "y")):
    """Parse ``text`` into a syntax tree over the given variables."""
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0, text)
    p = _Parser(text, set(allowed_vars))
    tree = p.expr()
    tok = p.peek()
    if tok[0] != "END":
        raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2], text)
    return tree


# -- evaluation: polynomials as {exponent tuple: Fraction}


def _padd(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pmul(a, b):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(i + j for i, j in zip(ka, kb))
            out[k] = out.get(k, 0) + va * vb
    return {k: v for k, v in out.items() if v}


def to_polynomial(tree, variables):
    """Expand a syntax tree into ``{exponents: coefficient}`` over ``variables``."""
    nv = len(variables)
    zero = (0,) * nv

    def ev(node):
        if isinstance(node, Num):
            return {zero: node.value} if node.value else {}
        if isinstance(node, Var):
            if node.name not in variables:
                raise UnknownVariable(f"variable {node.name!r} not in {list(variables)}")
            e = [0] * nv
            e[variables.index(node.name)] = 1
            return {tuple(e): Fraction(1)}
        if isinstance(node, Neg):
            return {k: -v for k, v in ev(node.operand).items()}
        if isinstance(node, Add):
            acc = {}
            for t in node.terms:
                acc = _padd(acc, ev(t))
            return acc
        if isinstance(node, Mul):
            acc = {zero: Fraction(1)}
            for fct in node.factors:
                acc = _pmul(acc, ev(fct))
            return acc
        if isinstance(node, Pow):
            base = ev(node.base)
            acc = {zero: Fraction(1)}
            e = node.exponent
            while e:
                if e & 1:
                    acc = _pmul(acc, base)
                e >>= 1
                if e:
                    base = _pmul(base, base)
            return acc
        raise TypeError(f"not an expression node: {node!r}")

    return ev(tree)


def parse_biseries(text, trunc):
    """Parse a polynomial in ``x, y`` into a BiSeries truncated at ``trunc``."""
    poly = to_polynomial(parse_expr(text, ("x", "y")), ("x", "y"))
    return BiSeries(poly, trunc)


def parse_tseries(text, trunc):
    """Parse a polynomial in ``t`` into a TSeries truncated at ``trunc``."""
    poly = to_polynomial(parse_expr(text, ("t",)), ("t",))
    return TSeries.from_dict({k[0]: v for k, v in poly.items()}, trunc)


def polynomial_degree(text, variables=("x", "y")):
    poly = to_polynomial(parse_expr(text, variables), variables)
    return max((sum(k) for k in poly), default=0)
