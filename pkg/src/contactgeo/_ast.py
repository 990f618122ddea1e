"""Expression AST shared by the parser, printer, tape compiler and oracles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Fn:
    name: str  # one of FUNCTIONS
    arg: "Node"


Node = Union[Num, Var, Neg, Bin, Fn]

# Precedence levels used by parser and printer.  '^' binds tighter than
# unary minus, which binds tighter than '*'/'/', which bind tighter than
# '+'/'-'.  '^' is right-associative.
_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5

_BIN_LEVEL = {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL, "^": _POW}


def node_level(node: Node) -> int:
    if isinstance(node, (Num, Var, Fn)):
        return _ATOM
    if isinstance(node, Neg):
        return _NEG
    return _BIN_LEVEL[node.op]


def to_string(node: Node) -> str:
    """Print with minimal parentheses; reparsing yields an equal AST."""
    if isinstance(node, Num):
        v = node.value
        if float(v).is_integer() and abs(v) < 1e16:
            return str(int(v))
        return repr(v)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Fn):
        return f"{node.name}({to_string(node.arg)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _NEG)
    lvl = _BIN_LEVEL[node.op]
    if node.op == "^":
        # base must be an atom; exponent may be any unary-level expression
        left = _wrap(node.left, _ATOM)
        right = _wrap(node.right, _NEG)
    else:
        left = _wrap(node.left, lvl)
        right = _wrap(node.right, lvl + 1)
    return f"{left} {node.op} {right}" if node.op in "+-" else f"{left}{node.op}{right}"


def _wrap(node: Node, minimum: int) -> str:
    s = to_string(node)
    return s if node_level(node) >= minimum else f"({s})"


def free_vars(node: Node) -> tuple[str, ...]:
    """Variable names in order of first appearance."""
    seen: list[str] = []

    def walk(n: Node) -> None:
        if isinstance(n, Var):
            if n.name not in seen:
                seen.append(n.name)
        elif isinstance(n, Neg):
            walk(n.arg)
        elif isinstance(n, Fn):
            walk(n.arg)
        elif isinstance(n, Bin):
            walk(n.left)
            walk(n.right)

    walk(node)
    return tuple(seen)


def substitute(node: Node, mapping: dict) -> Node:
    """Replace variables by numbers or other AST nodes."""
    if isinstance(node, Var):
        rep = mapping.get(node.name)
        if rep is None:
            return node
        if isinstance(rep, (int, float)):
            return num(float(rep))
        return rep
    if isinstance(node, Neg):
        return Neg(substitute(node.arg, mapping))
    if isinstance(node, Fn):
        return Fn(node.name, substitute(node.arg, mapping))
    if isinstance(node, Bin):
        return Bin(node.op, substitute(node.left, mapping), substitute(node.right, mapping))
    return node


def num(value: float) -> Node:
    # negative literals are normalised to Neg(Num(.)) so printing round-trips
    if value < 0:
        return Neg(Num(-value))
    return Num(value)
