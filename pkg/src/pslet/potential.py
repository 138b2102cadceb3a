"""Radial potentials: a small expression language and Taylor jets.

A potential is written in the variable ``r`` using numbers, ``+ - * /``,
integer powers ``^`` and parentheses::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := "-" factor | atom ("^" integer)?
    atom   := number | "r" | "(" expr ")"

Derivatives are obtained by propagating truncated Taylor series through the
tree (sum, Cauchy product, series division), never by finite differences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import InsufficientJet, PotentialSyntaxError, SingularPoint, UnknownSymbol
from .numeric import Precision, _as_precision

__all__ = [
    "Num", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "PotentialExpr", "Jet",
    "parse_potential", "to_text", "evaluate", "jet", "truncated_coulomb_jet",
    "truncated_coulomb_text",
]


@dataclass(frozen=True)
class Num:
    text: str

    def __repr__(self):
        return self.text


@dataclass(frozen=True)
class Var:
    def __repr__(self):
        return "r"


@dataclass(frozen=True)
class Neg:
    arg: "Node"

    def __repr__(self):
        return f"Neg({self.arg!r})"


@dataclass(frozen=True)
class _Binary:
    left: "Node"
    right: "Node"

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Add(_Binary):
    pass


class Sub(_Binary):
    pass


class Mul(_Binary):
    pass


class Div(_Binary):
    pass


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exponent})"


Node = Union[Num, Var, Neg, Add, Sub, Mul, Div, Pow]


@dataclass(frozen=True)
class PotentialExpr:
    """Parsed potential ``V(r)``; immutable."""

    tree: Node
    text: str

    def __str__(self):
        return self.text


# --------------------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PotentialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "ident" and value != "r":
            raise UnknownSymbol(f"unknown symbol {value!r}; only 'r' is allowed", start)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, off = self.take()
        if v != value or kind == "end":
            raise PotentialSyntaxError(f"expected {value!r}, found {v or 'end of input'!r}", off)

    def parse(self) -> Node:
        node = self.expr()
        kind, v, off = self.peek()
        if kind != "end":
            raise PotentialSyntaxError(f"unexpected token {v!r}", off)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Node:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            node = Pow(node, self.integer())
        return node

    def integer(self) -> int:
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1
        kind, v, off = self.take()
        if kind != "num" or not v.isdigit():
            raise PotentialSyntaxError(f"exponent must be an integer, found {v or 'end of input'!r}", off)
        return sign * int(v)

    def atom(self) -> Node:
        kind, v, off = self.take()
        if kind == "num":
            return Num(v)
        if kind == "ident":
            return Var()
        if v == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise PotentialSyntaxError(f"unexpected {v or 'end of input'!r}", off)


def parse_potential(text: str) -> PotentialExpr:
    """Parse potential text into a :class:`PotentialExpr`.

    >>> parse_potential("-1/(r+10)").tree
    Div(Neg(1), Add(r, 10))

    Raises
    ------
    PotentialSyntaxError
        Malformed input; ``offset`` locates the problem.
    UnknownSymbol
        Any identifier other than ``r``.
    """
    return PotentialExpr(_Parser(text).parse(), text)


_LEVEL = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Num: 5, Var: 5}
_SYMBOL = {Add: " + ", Sub: " - ", Mul: "*", Div: "/"}


def to_text(node: Node | PotentialExpr) -> str:
    """Render a tree with the minimal parentheses needed to reparse it identically."""
    if isinstance(node, PotentialExpr):
        node = node.tree

    def wrap(child, min_level):
        s = to_text(child)
        return f"({s})" if _LEVEL[type(child)] < min_level else s

    if isinstance(node, Num):
        return node.text
    if isinstance(node, Var):
        return "r"
    if isinstance(node, Neg):
        return "-" + wrap(node.arg, 3)
    if isinstance(node, Pow):
        return f"{wrap(node.base, 5)}^{node.exponent}"
    level = _LEVEL[type(node)]
    return wrap(node.left, level) + _SYMBOL[type(node)] + wrap(node.right, level + 1)


def truncated_coulomb_text(alpha) -> str:
    return f"-1/(r+{alpha})"


# --------------------------------------------------------------------------- evaluation

def evaluate(expr: PotentialExpr | Node, r, prec: Precision | int | None = None):
    """Direct pointwise evaluation of the expression at ``r``."""
    ctx = _as_precision(prec).ctx
    node = expr.tree if isinstance(expr, PotentialExpr) else expr
    r = ctx.mpf(r)

    def ev(n):
        if isinstance(n, Num):
            return ctx.mpf(n.text)
        if isinstance(n, Var):
            return r
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Pow):
            base = ev(n.base)
            if n.exponent < 0 and base == 0:
                raise SingularPoint("zero base raised to a negative power")
            return base ** n.exponent
        a, b = ev(n.left), ev(n.right)
        if isinstance(n, Add):
            return a + b
        if isinstance(n, Sub):
            return a - b
        if isinstance(n, Mul):
            return a * b
        if b == 0:
            raise SingularPoint("division by zero")
        return a / b

    return ev(node)


@dataclass(frozen=True)
class Jet:
    """Derivatives ``V(r0), V'(r0), ..., V^(K)(r0)`` at ``base_point``."""

    base_point: object
    derivs: tuple

    @property
    def order(self) -> int:
        return len(self.derivs) - 1

    def taylor(self) -> list:
        """Normalised Taylor coefficients ``V^(k)/k!``."""
        out = []
        fact = 1
        for k, d in enumerate(self.derivs):
            if k:
                fact *= k
            out.append(d / fact)
        return out

    def require(self, order: int) -> None:
        if self.order < order:
            raise InsufficientJet(f"need derivatives through order {order}, jet has {self.order}")


def _mul(a, b, K):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(K + 1)]


def _div(a, b, K):
    if b[0] == 0:
        raise SingularPoint("denominator vanishes at the expansion point")
    inv = 1 / b[0]
    q = []
    for k in range(K + 1):
        s = a[k]
        for i in range(1, k + 1):
            s -= b[i] * q[k - i]
        q.append(s * inv)
    return q


def _pow(a, e, K, one):
    if e < 0:
        unit = [one] + [0 * one] * K
        return _div(unit, _pow(a, -e, K, one), K)
    result = [one] + [0 * one] * K
    base = a
    while e:
        if e & 1:
            result = _mul(result, base, K)
        e >>= 1
        if e:
            base = _mul(base, base, K)
    return result


def jet(expr: PotentialExpr | Node, r, K: int, prec: Precision | int | None = None) -> Jet:
    """Exact derivatives of ``expr`` at ``r`` through order ``K``.

    Raises
    ------
    SingularPoint
        A division (or negative power) has a denominator vanishing at ``r``.
    """
    if K < 0:
        raise ValueError("K must be >= 0")
    ctx = _as_precision(prec).ctx
    node = expr.tree if isinstance(expr, PotentialExpr) else expr
    r = ctx.mpf(r)
    zero = ctx.zero

    def tj(n):
        if isinstance(n, Num):
            return [ctx.mpf(n.text)] + [zero] * K
        if isinstance(n, Var):
            return ([r, ctx.one] + [zero] * K)[: K + 1]
        if isinstance(n, Neg):
            return [-c for c in tj(n.arg)]
        if isinstance(n, Pow):
            return _pow(tj(n.base), n.exponent, K, ctx.one)
        a, b = tj(n.left), tj(n.right)
        if isinstance(n, Add):
            return [x + y for x, y in zip(a, b)]
        if isinstance(n, Sub):
            return [x - y for x, y in zip(a, b)]
        if isinstance(n, Mul):
            return _mul(a, b, K)
        return _div(a, b, K)

    coeffs = tj(node)
    derivs = []
    fact = ctx.one
    for k, c in enumerate(coeffs):
        if k:
            fact *= k
        derivs.append(c * fact)
    return Jet(r, tuple(derivs))


def truncated_coulomb_jet(alpha, r, K: int, prec: Precision | int | None = None) -> Jet:
    """Closed-form derivatives of ``-1/(r + alpha)``: ``(-1)^(k+1) k! (r+alpha)^-(k+1)``."""
    ctx = _as_precision(prec).ctx
    alpha, r = ctx.mpf(alpha), ctx.mpf(r)
    x = r + alpha
    if x <= 0:
        raise SingularPoint(f"r + alpha = {x} must be positive")
    inv = 1 / x
    derivs = []
    term = -inv  # (-1)^(k+1) k! x^-(k+1) for k = 0
    for k in range(K + 1):
        derivs.append(term)
        term = -term * (k + 1) * inv
    return Jet(r, tuple(derivs))
