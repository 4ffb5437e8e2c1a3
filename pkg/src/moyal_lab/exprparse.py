"""Symbol expressions for the command line.

Grammar (recursive descent, ^ binds tighter than *, which binds tighter
than + and -; all binary operators left-associative; no implicit
multiplication):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | power
    power   := atom ('^' INT)*
    atom    := INT ('/' INT)?            rational literal
             | VAR                       x, xi, y, eta, hbar (d = 1)
             |                           x1..xd, xi1..xid, y1.., eta1.. (d > 1)
             | 'gauss' '(' rational ')'  envelope exp(-a |X|^2), a > 0
             | '(' expr ')'

The slash appears only inside rational literals; there is no division
operator.  Exponents are non-negative integer literals.  Expressions lower
either to exact `PolySymbol`s (no gauss factors allowed) or to numeric
`SymbolEvaluator`s (d = 1, at most one gauss factor per product term).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .crational import CRational
from .polysym import PolySymbol, Shape


class ExprError(ValueError):
    """Lexical/syntax/lowering error with a source position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Node:
    span: tuple


@dataclass(frozen=True)
class Lit(Node):
    value: Fraction


@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Gauss(Node):
    rate: Fraction


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")

_VAR = re.compile(r"^(x|xi|y|eta)([1-9][0-9]*)?$|^hbar$")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExprError(f"unexpected character {stripped[0]!r}", pos)
        if m.group(1):
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ExprError(f"expected {op!r}, found {val or 'end of input'!r}", pos)
        return pos

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError(f"trailing input {val!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                right = self.term()
                cls = Add if val == "+" else Sub
                node = cls((node.span[0], right.span[1]), node, right)
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.next()
                right = self.factor()
                node = Mul((node.span[0], right.span[1]), node, right)
            else:
                return node

    def factor(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            arg = self.factor()
            return Neg((pos, arg.span[1]), arg)
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "^":
                self.next()
                ekind, eval_, epos = self.next()
                if ekind != "int":
                    raise ExprError("exponent must be a non-negative integer", epos)
                node = Pow((node.span[0], epos + len(eval_)), node, int(eval_))
            else:
                return node

    def rational(self) -> tuple[Fraction, tuple]:
        neg = False
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            neg = True
        kind, val, pos = self.next()
        if kind != "int":
            raise ExprError("expected an integer", pos)
        start = pos
        num = int(val)
        den = 1
        kind, val2, pos2 = self.peek()
        end = pos + len(val)
        if kind == "op" and val2 == "/":
            self.next()
            dkind, dval, dpos = self.next()
            if dkind != "int":
                raise ExprError("expected a denominator integer", dpos)
            den = int(dval)
            if den == 0:
                raise ExprError("zero denominator", dpos)
            end = dpos + len(dval)
        value = Fraction(-num if neg else num, den)
        return value, (start, end)

    def atom(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "int":
            value, span = self.rational()
            return Lit(span, value)
        if kind == "name":
            self.next()
            if val == "gauss":
                self.expect_op("(")
                rate, _ = self.rational()
                endpos = self.expect_op(")")
                if rate <= 0:
                    raise ExprError("gauss rate must be positive", pos)
                return Gauss((pos, endpos + 1), rate)
            if not _VAR.match(val):
                raise ExprError(f"unknown variable {val!r}", pos)
            return Var((pos, pos + len(val)), val)
        if kind == "op" and val == "(":
            self.next()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprError(f"expected a value, found {val or 'end of input'!r}", pos)


def parse_symbol(text: str) -> Node:
    """Parse an expression into its AST (raises ExprError with position)."""
    return _Parser(text).parse()


def pretty(node: Node) -> str:
    """Canonical rendering; parse(pretty(parse(s))) is a fixed point."""

    def prec(n):
        if isinstance(n, (Add, Sub)):
            return 1
        if isinstance(n, Mul):
            return 2
        if isinstance(n, Neg):
            return 3
        if isinstance(n, Pow):
            return 4
        return 5

    def wrap(n, level):
        s = pretty(n)
        return f"({s})" if prec(n) < level else s

    if isinstance(node, Lit):
        v = node.value
        if v < 0:
            return f"-{-v.numerator}" if v.denominator == 1 else f"-{-v.numerator}/{v.denominator}"
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Gauss):
        r = node.rate
        inner = str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
        return f"gauss({inner})"
    if isinstance(node, Neg):
        return "-" + wrap(node.arg, 3)
    if isinstance(node, Add):
        return f"{wrap(node.left, 1)} + {wrap(node.right, 2)}"
    if isinstance(node, Sub):
        return f"{wrap(node.left, 1)} - {wrap(node.right, 2)}"
    if isinstance(node, Mul):
        return f"{wrap(node.left, 2)}*{wrap(node.right, 3)}"
    if isinstance(node, Pow):
        return f"{wrap(node.base, 5)}^{node.exponent}"
    raise TypeError(f"unknown node {node!r}")


def _var_target(name: str, d: int) -> tuple[str, int]:
    if name == "hbar":
        return "hbar", 0
    m = _VAR.match(name)
    block = m.group(1)
    axis = int(m.group(2)) - 1 if m.group(2) else 0
    if d == 1 and m.group(2):
        raise ExprError(f"indexed variable {name!r} in dimension 1", 0)
    if axis >= d:
        raise ExprError(f"variable {name!r} exceeds dimension {d}", 0)
    return block, axis


def lower_poly(node: Node, d: int = 1, allow_y: bool = False,
               allow_hbar: bool = False) -> PolySymbol:
    """Lower to an exact PolySymbol; gauss factors are rejected here."""
    shape = Shape(d, allow_y, allow_hbar)

    def go(n):
        if isinstance(n, Lit):
            return PolySymbol.const(shape, CRational(n.value))
        if isinstance(n, Var):
            block, axis = _var_target(n.name, d)
            if block in ("y", "eta") and not allow_y:
                raise ExprError(f"test-point variable {n.name!r} not allowed here", n.span[0])
            if block == "hbar":
                if not allow_hbar:
                    raise ExprError("hbar not allowed here", n.span[0])
                return PolySymbol.var(shape, "hbar")
            return PolySymbol.var(shape, block, axis)
        if isinstance(n, Gauss):
            raise ExprError("gauss envelope requires a numeric context", n.span[0])
        if isinstance(n, Neg):
            return -go(n.arg)
        if isinstance(n, Add):
            return go(n.left) + go(n.right)
        if isinstance(n, Sub):
            return go(n.left) - go(n.right)
        if isinstance(n, Mul):
            return go(n.left) * go(n.right)
        if isinstance(n, Pow):
            return go(n.base) ** n.exponent
        raise TypeError(f"unknown node {n!r}")

    return go(node)


def lower_evaluator(node: Node):
    """Lower to a numeric SymbolEvaluator (d = 1, one gauss per term)."""
    from .evaluators import SymbolEvaluator

    shape = Shape(1)

    # a term list [(poly, rate or None)]; sums concatenate, products combine
    def go(n):
        if isinstance(n, Lit):
            return [(PolySymbol.const(shape, CRational(n.value)), None)]
        if isinstance(n, Var):
            block, axis = _var_target(n.name, 1)
            if block in ("y", "eta", "hbar"):
                raise ExprError(f"variable {n.name!r} not allowed in a grid symbol", n.span[0])
            return [(PolySymbol.var(shape, block, axis), None)]
        if isinstance(n, Gauss):
            return [(PolySymbol.const(shape, 1), n.rate)]
        if isinstance(n, Neg):
            return [(-p, r) for p, r in go(n.arg)]
        if isinstance(n, Add):
            return go(n.left) + go(n.right)
        if isinstance(n, Sub):
            return go(n.left) + [(-p, r) for p, r in go(n.right)]
        if isinstance(n, Mul):
            out = []
            for p1, r1 in go(n.left):
                for p2, r2 in go(n.right):
                    if r1 is not None and r2 is not None:
                        raise ExprError("at most one gauss factor per product term",
                                        n.span[0])
                    out.append((p1 * p2, r1 if r1 is not None else r2))
            return out
        if isinstance(n, Pow):
            out = [(PolySymbol.const(shape, 1), None)]
            for _ in range(n.exponent):
                nxt = []
                for p1, r1 in out:
                    for p2, r2 in go(n.base):
                        if r1 is not None and r2 is not None:
                            raise ExprError("at most one gauss factor per product term",
                                            n.span[0])
                        nxt.append((p1 * p2, r1 if r1 is not None else r2))
                out = nxt
            return out
        raise TypeError(f"unknown node {n!r}")

    ev = SymbolEvaluator.zero()
    for poly, rate in go(node):
        piece = SymbolEvaluator.from_polysymbol(poly)
        if rate is not None:
            piece = piece * SymbolEvaluator.gauss(float(rate))
        ev = ev + piece
    return ev
