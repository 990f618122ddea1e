"""Compilation of expression ASTs to a flat operation tape.

The tape is a straight-line program over jet registers (value, gradient,
Hessian).  It is executed either by the numba kernel in ``_tape_numba`` or by
the vectorized numpy interpreter in ``_tape_numpy``; see ``backends``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _ast
from ._ast import Fn, Neg, Node, Num, Var
from .errors import ExprDomainError

OP_CONST = 0
OP_VAR = 1
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_NEG = 6
OP_EXP = 7
OP_LOG = 8
OP_SIN = 9
OP_COS = 10
OP_SQRT = 11
OP_POWI = 12

_FN_OPS = {"exp": OP_EXP, "log": OP_LOG, "sin": OP_SIN, "cos": OP_COS, "sqrt": OP_SQRT}
_BIN_OPS = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV}

ERROR_MESSAGES = {
    1: "division by zero",
    2: "log of non-positive value",
    3: "sqrt of non-positive value",
    4: "zero base raised to a negative power",
}


@dataclass
class Tape:
    ops: np.ndarray  # (n, 4) int64: code, a, b, out
    consts: np.ndarray  # (nconst,) float64
    nreg: int
    var_order: tuple[str, ...]
    sources: tuple[str, ...]  # printable sub-expression per op, for errors


def _int_exponent(node: Node):
    """Return the exponent as int when the node is an integer literal."""
    if isinstance(node, Num) and float(node.value).is_integer():
        return int(node.value)
    if isinstance(node, Neg) and isinstance(node.arg, Num) and float(node.arg.value).is_integer():
        return -int(node.arg.value)
    return None


def compile_expr(ast: Node, var_order: tuple[str, ...]) -> Tape:
    ops: list[tuple[int, int, int, int]] = []
    consts: list[float] = []
    sources: list[str] = []
    var_index = {name: i for i, name in enumerate(var_order)}
    counter = [0]

    def fresh() -> int:
        counter[0] += 1
        return counter[0] - 1

    def emit(code: int, a: int, b: int, node: Node) -> int:
        out = fresh()
        ops.append((code, a, b, out))
        sources.append(_ast.to_string(node))
        return out

    def const_reg(value: float, node: Node) -> int:
        consts.append(float(value))
        return emit(OP_CONST, len(consts) - 1, 0, node)

    def walk(node: Node) -> int:
        if isinstance(node, Num):
            return const_reg(node.value, node)
        if isinstance(node, Var):
            if node.name not in var_index:
                raise KeyError(f"variable '{node.name}' not in evaluation order")
            return emit(OP_VAR, var_index[node.name], 0, node)
        if isinstance(node, Neg):
            return emit(OP_NEG, walk(node.arg), 0, node)
        if isinstance(node, Fn):
            return emit(_FN_OPS[node.name], walk(node.arg), 0, node)
        if node.op == "^":
            n = _int_exponent(node.right)
            if n == 0:
                return const_reg(1.0, node)
            if n is not None:
                return emit(OP_POWI, walk(node.left), n, node)
            # general power: exp(e * log(b)), requires b > 0
            base = emit(OP_LOG, walk(node.left), 0, node)
            prod = emit(OP_MUL, walk(node.right), base, node)
            return emit(OP_EXP, prod, 0, node)
        return emit(_BIN_OPS[node.op], walk(node.left), walk(node.right), node)

    walk(ast)
    return Tape(
        ops=np.array(ops, dtype=np.int64).reshape(len(ops), 4),
        consts=np.array(consts, dtype=np.float64),
        nreg=counter[0],
        var_order=var_order,
        sources=tuple(sources),
    )


def run_tape(tape: Tape, x: np.ndarray, seedm: np.ndarray):
    """Evaluate the tape at a batch of points.

    x: (P, nvars) coordinate values; seedm: (nvars, d) seeding matrix whose
    rows are the gradients of the variables.  Returns (val (P,), grad (P,d),
    hess (P,d,d)); the Hessian is exactly symmetric by construction.
    """
    from . import backends

    val, grad, hess, err = backends.execute(tape, x, seedm)
    if err[0] != 0:
        code, op_idx = int(err[0]), int(err[1])
        raise ExprDomainError(ERROR_MESSAGES.get(code, "domain error"), tape.sources[op_idx])
    return val, grad, hess
