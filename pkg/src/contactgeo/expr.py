"""Scalar-field expression language.

All manifold data (metric entries, structure tensor components, projection
maps, warping functions) is written in this small infix language over named
coordinates.  Expressions are immutable after parsing and evaluation is pure,
so one expression may be evaluated concurrently at many points.

Grammar (EBNF):

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;            (* right-associative *)
    atom    = NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;
    NUMBER  = digits ["." digits] [("e"|"E") ["+"|"-"] digits] | "." digits ... ;
    IDENT   = letter | "_" , { letter | digit | "_" } ;

Known functions: exp, log, sin, cos, sqrt.  "^" with a non-integer exponent
is evaluated as exp(e*log(b)) and requires b > 0.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from . import _ast
from ._ast import Bin, Fn, Neg, Node, Num, Var
from .errors import ExprSyntaxError, UnknownFunctionError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class _Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind: str, text: str, offset: int):
        self.kind = kind
        self.text = text
        self.offset = offset


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        tokens.append(_Token(m.lastgroup, m.group(), m.start()))
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        if self.cur.kind == "op" and self.cur.text == op:
            self.advance()
            return
        raise ExprSyntaxError(f"expected '{op}'", self.cur.offset)

    def parse(self) -> Node:
        node = self.expr()
        if self.cur.kind != "end":
            raise ExprSyntaxError(
                f"unexpected trailing input {self.cur.text!r}", self.cur.offset
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.advance().text
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.advance().text
            node = Bin(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.cur.kind == "op" and self.cur.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            self.advance()
            return Bin("^", base, self.unary())
        return base

    def atom(self) -> Node:
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            self.advance()
            if self.cur.kind == "op" and self.cur.text == "(":
                if tok.text not in _ast.FUNCTIONS:
                    raise UnknownFunctionError(
                        f"unknown function '{tok.text}'", tok.offset
                    )
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Fn(tok.text, arg)
            return Var(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError("expected operand", tok.offset)


class ScalarFieldExpr:
    """A parsed scalar field over named coordinates.

    Immutable; compiled evaluation tapes are cached per coordinate ordering.
    """

    __slots__ = ("ast", "free_vars", "_tapes")

    def __init__(self, ast: Node):
        self.ast = ast
        self.free_vars = _ast.free_vars(ast)
        self._tapes = {}

    def __str__(self) -> str:
        return _ast.to_string(self.ast)

    def __repr__(self) -> str:
        return f"ScalarFieldExpr({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ScalarFieldExpr) and self.ast == other.ast

    def __hash__(self) -> int:
        return hash(self.ast)

    # ---- algebraic combinators (used by the construction builders) ----

    def _combine(self, other, op: str, swap=False) -> "ScalarFieldExpr":
        other = as_expr(other)
        left, right = (other.ast, self.ast) if swap else (self.ast, other.ast)
        return ScalarFieldExpr(Bin(op, left, right))

    def __add__(self, other):
        return self._combine(other, "+")

    def __radd__(self, other):
        return self._combine(other, "+", swap=True)

    def __sub__(self, other):
        return self._combine(other, "-")

    def __rsub__(self, other):
        return self._combine(other, "-", swap=True)

    def __mul__(self, other):
        return self._combine(other, "*")

    def __rmul__(self, other):
        return self._combine(other, "*", swap=True)

    def __truediv__(self, other):
        return self._combine(other, "/")

    def __rtruediv__(self, other):
        return self._combine(other, "/", swap=True)

    def __neg__(self):
        return ScalarFieldExpr(Neg(self.ast))

    def is_zero(self) -> bool:
        return isinstance(self.ast, Num) and self.ast.value == 0.0

    def subs(self, mapping: Mapping[str, Union[float, "ScalarFieldExpr"]]) -> "ScalarFieldExpr":
        """Substitute coordinates by numbers or other expressions."""
        rep = {
            k: (v.ast if isinstance(v, ScalarFieldExpr) else v)
            for k, v in mapping.items()
        }
        return ScalarFieldExpr(_ast.substitute(self.ast, rep))

    def rename(self, mapping: Mapping[str, str]) -> "ScalarFieldExpr":
        rep = {k: Var(v) for k, v in mapping.items()}
        return ScalarFieldExpr(_ast.substitute(self.ast, rep))

    # ---- evaluation ----

    def tape_for(self, var_order: tuple[str, ...]):
        tape = self._tapes.get(var_order)
        if tape is None:
            from . import tape as tape_mod

            tape = tape_mod.compile_expr(self.ast, var_order)
            self._tapes[var_order] = tape
        return tape

    def eval_jet(self, point: Mapping[str, float], seed: Sequence[str]):
        """Order-2 Taylor data of the expression at *point*.

        ``seed`` lists the coordinates that act as differentiation
        variables, in the order defining the gradient axes.
        """
        from . import tape as tape_mod
        from .jets import Jet2

        missing = [v for v in self.free_vars if v not in point]
        if missing:
            raise KeyError(f"unassigned coordinates: {', '.join(missing)}")
        var_order = tuple(self.free_vars)
        tape = self.tape_for(var_order)
        import numpy as np

        x = np.array([[float(point[v]) for v in var_order]], dtype=float)
        seed = tuple(seed)
        seedm = np.zeros((len(var_order), len(seed)))
        for j, name in enumerate(seed):
            if name in var_order:
                seedm[var_order.index(name), j] = 1.0
        val, grad, hess = tape_mod.run_tape(tape, x, seedm)
        return Jet2(float(val[0]), grad[0], hess[0])

    def eval_value(self, point: Mapping[str, float]) -> float:
        """Plain float evaluation by direct AST recursion.

        Kept independent of the tape kernels so it can serve as an oracle.
        """
        import math

        from .errors import ExprDomainError

        def ev(n: Node) -> float:
            if isinstance(n, Num):
                return n.value
            if isinstance(n, Var):
                return float(point[n.name])
            if isinstance(n, Neg):
                return -ev(n.arg)
            if isinstance(n, Fn):
                a = ev(n.arg)
                if n.name == "exp":
                    return math.exp(a)
                if n.name == "log":
                    if a <= 0:
                        raise ExprDomainError("log of non-positive value", _ast.to_string(n))
                    return math.log(a)
                if n.name == "sin":
                    return math.sin(a)
                if n.name == "cos":
                    return math.cos(a)
                if a <= 0 and n.name == "sqrt":
                    raise ExprDomainError("sqrt of non-positive value", _ast.to_string(n))
                return math.sqrt(a)
            a, b = ev(n.left), ev(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a * b
            if n.op == "/":
                if b == 0:
                    raise ExprDomainError("division by zero", _ast.to_string(n))
                return a / b
            if b == int(b):
                return a ** int(b)
            if a <= 0:
                raise ExprDomainError("power of non-positive base", _ast.to_string(n))
            return math.exp(b * math.log(a))

        return ev(self.ast)

    def eval_fraction(self, point: Mapping[str, Fraction]) -> Fraction:
        """Exact rational evaluation; only defined for polynomial ASTs."""

        def ev(n: Node) -> Fraction:
            if isinstance(n, Num):
                return Fraction(n.value)
            if isinstance(n, Var):
                return Fraction(point[n.name])
            if isinstance(n, Neg):
                return -ev(n.arg)
            if isinstance(n, Fn):
                raise ValueError(f"non-polynomial function {n.name} in rational eval")
            a, b = ev(n.left), ev(n.right)
            if n.op == "+":
                return a + b
            if n.op == "-":
                return a - b
            if n.op == "*":
                return a * b
            if n.op == "/":
                return a / b
            if b.denominator != 1:
                raise ValueError("non-integer exponent in rational eval")
            return a ** int(b)

        return ev(self.ast)


ExprLike = Union[str, float, int, ScalarFieldExpr]


def as_expr(source: ExprLike) -> ScalarFieldExpr:
    if isinstance(source, ScalarFieldExpr):
        return source
    if isinstance(source, (int, float)):
        return ScalarFieldExpr(_ast.num(float(source)))
    return parse(source)


def parse(source: str) -> ScalarFieldExpr:
    """Parse UTF-8 text into a ScalarFieldExpr.

    Raises ExprSyntaxError with the byte offset of the problem and an
    expected-token message; UnknownFunctionError for `name(...)` with an
    unknown name; empty input is a syntax error.
    """
    if not isinstance(source, str):
        raise TypeError("expression source must be a string")
    if source.strip() == "":
        raise ExprSyntaxError("empty input, expected expression", 0)
    return ScalarFieldExpr(_Parser(_tokenize(source)).parse())


def free_variables(expr: ScalarFieldExpr) -> list[str]:
    """Coordinate names in order of first appearance."""
    return list(as_expr(expr).free_vars)


def eval_jet(expr: ExprLike, point: Mapping[str, float], seed: Sequence[str]):
    """Order-2 Taylor data of an expression at a point; see
    ScalarFieldExpr.eval_jet."""
    return as_expr(expr).eval_jet(point, seed)


def parse_grid(rows: Iterable[Iterable[ExprLike]]):
    """Parse a nested list of expression sources into a 2-d object array."""
    import numpy as np

    grid = [[as_expr(e) for e in row] for row in rows]
    arr = np.empty((len(grid), len(grid[0])), dtype=object)
    for i, row in enumerate(grid):
        if len(row) != arr.shape[1]:
            raise ValueError("ragged expression grid")
        for j, e in enumerate(row):
            arr[i, j] = e
    return arr


def parse_list(items: Iterable[ExprLike]):
    import numpy as np

    lst = [as_expr(e) for e in items]
    arr = np.empty(len(lst), dtype=object)
    for i, e in enumerate(lst):
        arr[i] = e
    return arr
