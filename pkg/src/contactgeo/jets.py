"""Order-2 forward-mode jets and jet-valued small dense linear algebra.

A jet carries the value, gradient and Hessian of a quantity with respect to
the seeded coordinates.  ``JetArray`` holds a whole tensor of jets (metric,
endomorphism field, Christoffel symbols, frames) with the derivative axes
trailing, so tensor algebra vectorizes over numpy.

Orders: directly evaluated fields carry order 2; applying ``partial_all``
(an exact reinterpretation, not a new computation) drops the order by one.
Binary operations truncate to the lower operand order, so derived quantities
never claim derivatives they do not have.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DependentFrameError, ExprDomainError, SingularMatrixError


class JetArray:
    """Tensor of jets: ``val`` has the tensor shape S, ``grad`` S+(d,),
    ``hess`` S+(d,d).  ``order`` in {0, 1, 2} says which arrays are valid."""

    __slots__ = ("val", "grad", "hess", "order")

    def __init__(self, val, grad=None, hess=None, order=None):
        self.val = np.asarray(val, dtype=float)
        self.grad = None if grad is None else np.asarray(grad, dtype=float)
        self.hess = None if hess is None else np.asarray(hess, dtype=float)
        if order is None:
            order = 0 if self.grad is None else (1 if self.hess is None else 2)
        self.order = order
        if self.order >= 1 and self.grad is None:
            raise ValueError("order >= 1 requires grad")
        if self.order >= 2 and self.hess is None:
            raise ValueError("order == 2 requires hess")

    # ---- constructors ----

    @staticmethod
    def constant(val, d: int, order: int = 2) -> "JetArray":
        val = np.asarray(val, dtype=float)
        grad = np.zeros(val.shape + (d,)) if order >= 1 else None
        hess = np.zeros(val.shape + (d, d)) if order >= 2 else None
        return JetArray(val, grad, hess, order)

    @staticmethod
    def coordinates(values: Sequence[float]) -> "JetArray":
        """The chart coordinates as jets seeded on themselves (order 2)."""
        v = np.asarray(values, dtype=float)
        d = v.shape[0]
        return JetArray(v, np.eye(d), np.zeros((d, d, d)), 2)

    # ---- basic properties ----

    @property
    def shape(self):
        return self.val.shape

    @property
    def d(self) -> int:
        if self.grad is not None:
            return self.grad.shape[-1]
        raise ValueError("order-0 jet has no derivative axis")

    def copy(self) -> "JetArray":
        return JetArray(
            self.val.copy(),
            None if self.grad is None else self.grad.copy(),
            None if self.hess is None else self.hess.copy(),
            self.order,
        )

    def truncate(self, order: int) -> "JetArray":
        order = min(order, self.order)
        return JetArray(
            self.val,
            self.grad if order >= 1 else None,
            self.hess if order >= 2 else None,
            order,
        )

    def partial_all(self) -> "JetArray":
        """Coordinate derivative: shape S -> S+(d,), order drops by one.

        Exact reinterpretation of the stored Taylor data."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        return JetArray(self.grad, self.hess, None, self.order - 1)

    def __getitem__(self, idx) -> "JetArray":
        return JetArray(
            self.val[idx],
            None if self.grad is None else self.grad[idx],
            None if self.hess is None else self.hess[idx],
            self.order,
        )

    def __repr__(self):
        return f"JetArray(shape={self.shape}, order={self.order})"

    # ---- arithmetic ----

    def __add__(self, other):
        if isinstance(other, JetArray):
            order = min(self.order, other.order)
            return JetArray(
                self.val + other.val,
                self.grad + other.grad if order >= 1 else None,
                self.hess + other.hess if order >= 2 else None,
                order,
            )
        return JetArray(self.val + other, self.grad, self.hess, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, JetArray):
            order = min(self.order, other.order)
            return JetArray(
                self.val - other.val,
                self.grad - other.grad if order >= 1 else None,
                self.hess - other.hess if order >= 2 else None,
                order,
            )
        return JetArray(self.val - other, self.grad, self.hess, self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return JetArray(
            -self.val,
            None if self.grad is None else -self.grad,
            None if self.hess is None else -self.hess,
            self.order,
        )

    def __mul__(self, other):
        if not isinstance(other, JetArray):
            return JetArray(
                self.val * other,
                None if self.grad is None else self.grad * other,
                None if self.hess is None else self.hess * other,
                self.order,
            )
        order = min(self.order, other.order)
        av, bv = self.val, other.val
        val = av * bv
        grad = hess = None
        if order >= 1:
            grad = self.grad * bv[..., None] + other.grad * av[..., None]
        if order >= 2:
            cross = self.grad[..., :, None] * other.grad[..., None, :]
            hess = (
                self.hess * bv[..., None, None]
                + other.hess * av[..., None, None]
                + cross
                + np.swapaxes(cross, -1, -2)
            )
        return JetArray(val, grad, hess, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, JetArray):
            return self * (1.0 / other)
        if np.any(other.val == 0.0):
            raise ExprDomainError("division by zero in jet arithmetic")
        order = min(self.order, other.order)
        q = self.val / other.val
        grad = hess = None
        if order >= 1:
            grad = (self.grad - q[..., None] * other.grad) / other.val[..., None]
        if order >= 2:
            cross = grad[..., :, None] * other.grad[..., None, :]
            hess = (
                self.hess
                - cross
                - np.swapaxes(cross, -1, -2)
                - q[..., None, None] * other.hess
            ) / other.val[..., None, None]
        return JetArray(q, grad, hess, order)

    def __rtruediv__(self, other):
        return JetArray.constant(np.broadcast_to(np.asarray(other, float), self.shape), self.d if self.order else 0, self.order) / self


def _chain(a: JetArray, v, d1, d2) -> JetArray:
    grad = hess = None
    if a.order >= 1:
        grad = d1[..., None] * a.grad
    if a.order >= 2:
        outer = a.grad[..., :, None] * a.grad[..., None, :]
        hess = d1[..., None, None] * a.hess + d2[..., None, None] * outer
    return JetArray(v, grad, hess, a.order)


def jet_apply(fn: str, a: JetArray) -> JetArray:
    """Apply an elementary function elementwise with the exact chain rule."""
    v = a.val
    if fn == "neg":
        return -a
    if fn == "exp":
        e = np.exp(v)
        return _chain(a, e, e, e)
    if fn == "log":
        if np.any(v <= 0.0):
            raise ExprDomainError("log of non-positive value")
        return _chain(a, np.log(v), 1.0 / v, -1.0 / (v * v))
    if fn == "sin":
        s, c = np.sin(v), np.cos(v)
        return _chain(a, s, c, -s)
    if fn == "cos":
        s, c = np.sin(v), np.cos(v)
        return _chain(a, c, -s, -c)
    if fn == "sqrt":
        if np.any(v <= 0.0):
            raise ExprDomainError("sqrt of non-positive value")
        r = np.sqrt(v)
        return _chain(a, r, 0.5 / r, -0.25 / (r * v))
    raise ValueError(f"unknown function {fn!r}")


def jsqrt(a: JetArray) -> JetArray:
    return jet_apply("sqrt", a)


# square jet matrices (metric blocks, lifts, projectors) are plain 2-d
# JetArrays; the alias names that usage
JetMatrix = JetArray


# ---- contraction ----


def jt_einsum(spec: str, a: JetArray, b: JetArray) -> JetArray:
    """Binary einsum with the jet product rule.

    Subscripts must be lowercase; 'Z' and 'W' are reserved for the
    derivative axes."""
    ins, out = spec.split("->")
    a_s, b_s = ins.split(",")
    order = min(a.order, b.order)
    val = np.einsum(spec, a.val, b.val)
    grad = hess = None
    if order >= 1:
        grad = np.einsum(f"{a_s}Z,{b_s}->{out}Z", a.grad, b.val) + np.einsum(
            f"{a_s},{b_s}Z->{out}Z", a.val, b.grad
        )
    if order >= 2:
        cross = np.einsum(f"{a_s}Z,{b_s}W->{out}ZW", a.grad, b.grad)
        hess = (
            np.einsum(f"{a_s}ZW,{b_s}->{out}ZW", a.hess, b.val)
            + np.einsum(f"{a_s},{b_s}ZW->{out}ZW", a.val, b.hess)
            + cross
            + np.swapaxes(cross, -1, -2)
        )
    return JetArray(val, grad, hess, order)


def jt_map(spec: str, a: JetArray) -> JetArray:
    """Linear single-operand einsum (transpose, trace, axis sum)."""
    ins, out = spec.split("->")
    val = np.einsum(spec, a.val)
    grad = hess = None
    if a.order >= 1:
        grad = np.einsum(f"{ins}Z->{out}Z", a.grad)
    if a.order >= 2:
        hess = np.einsum(f"{ins}ZW->{out}ZW", a.hess)
    return JetArray(val, grad, hess, a.order)


def jt_stack(items: Iterable[JetArray], axis: int = 0) -> JetArray:
    items = list(items)
    order = min(it.order for it in items)
    val = np.stack([it.val for it in items], axis=axis)
    grad = hess = None
    if order >= 1:
        grad = np.stack([it.grad for it in items], axis=axis)
    if order >= 2:
        hess = np.stack([it.hess for it in items], axis=axis)
    return JetArray(val, grad, hess, order)


def jt_setitem(dst: JetArray, idx, src: JetArray) -> None:
    dst.val[idx] = src.val
    if dst.order >= 1:
        dst.grad[idx] = src.grad
    if dst.order >= 2:
        dst.hess[idx] = src.hess


# ---- public scalar jet ----


class Jet2:
    """Order-2 Taylor data of a scalar: value, gradient, symmetric Hessian."""

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value: float, grad, hess):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)
        if self.hess.shape != (self.grad.shape[0], self.grad.shape[0]):
            raise ValueError("hess must be d x d for a gradient of length d")

    @staticmethod
    def constant(value: float, d: int) -> "Jet2":
        return Jet2(value, np.zeros(d), np.zeros((d, d)))

    @staticmethod
    def variable(value: float, index: int, d: int) -> "Jet2":
        g = np.zeros(d)
        g[index] = 1.0
        return Jet2(value, g, np.zeros((d, d)))

    @property
    def d(self) -> int:
        return self.grad.shape[0]

    def _arr(self) -> JetArray:
        return JetArray(self.value, self.grad, self.hess, 2)

    @staticmethod
    def _from_arr(a: JetArray) -> "Jet2":
        return Jet2(float(a.val), a.grad, a.hess)

    def __repr__(self):
        return f"Jet2(value={self.value!r}, grad={self.grad.tolist()}, hess={self.hess.tolist()})"

    def allclose(self, other: "Jet2", tol: float = 0.0) -> bool:
        return (
            abs(self.value - other.value) <= tol
            and np.all(np.abs(self.grad - other.grad) <= tol)
            and np.all(np.abs(self.hess - other.hess) <= tol)
        )


def jet_binary(op: str, a: Jet2, b: Jet2) -> Jet2:
    """Exact order-2 arithmetic on scalar jets: op in '+', '-', '*', '/'."""
    x, y = a._arr(), b._arr()
    if op == "+":
        r = x + y
    elif op == "-":
        r = x - y
    elif op == "*":
        r = x * y
    elif op == "/":
        r = x / y
    else:
        raise ValueError(f"unknown binary op {op!r}")
    return Jet2._from_arr(r)


def jet_unary(fn: str, a: Jet2) -> Jet2:
    """fn in neg, exp, log, sin, cos, sqrt; exact chain rule through order 2."""
    return Jet2._from_arr(jet_apply(fn, a._arr()))


# ---- jet linear algebra ----


def jet_solve_linear(a: JetArray, b: JetArray) -> JetArray:
    """Solve A X = B in jet arithmetic.

    Gauss-Jordan elimination with partial pivoting decided by the value
    parts only, so the solution is a smooth function of parameters wherever
    the value pivot pattern is stable.  Raises SingularMatrixError when a
    pivot falls below 1e-12 of its row scale.
    """
    if a.val.ndim != 2 or a.val.shape[0] != a.val.shape[1]:
        raise ValueError("A must be square")
    vector_rhs = b.val.ndim == 1
    if vector_rhs:
        b = JetArray(
            b.val[:, None],
            None if b.grad is None else b.grad[:, None],
            None if b.hess is None else b.hess[:, None],
            b.order,
        )
    k = a.val.shape[0]
    order = min(a.order, b.order)
    A = a.truncate(order).copy()
    B = b.truncate(order).copy()
    scale = np.max(np.abs(A.val), axis=1)
    perm = list(range(k))
    for col in range(k):
        rows = np.arange(col, k)
        cand = np.abs(A.val[rows, col]) / np.where(scale[perm][col:] > 0, scale[perm][col:], 1.0)
        best = col + int(np.argmax(cand))
        if abs(A.val[best, col]) <= 1e-12 * max(scale[perm[best]], 1e-300) or scale[perm[best]] == 0.0:
            raise SingularMatrixError(f"singular value part (pivot column {col})")
        if best != col:
            for arr in (A, B):
                arr.val[[col, best]] = arr.val[[best, col]]
                if order >= 1:
                    arr.grad[[col, best]] = arr.grad[[best, col]]
                if order >= 2:
                    arr.hess[[col, best]] = arr.hess[[best, col]]
            perm[col], perm[best] = perm[best], perm[col]
        pivot_row_a = A[col]
        pivot_row_b = B[col]
        pivot = A[col, col]
        for r in range(k):
            if r == col:
                continue
            f = A[r, col] / pivot
            jt_setitem(A, r, A[r] - f * pivot_row_a)
            jt_setitem(B, r, B[r] - f * pivot_row_b)
            # the eliminated entry is exactly zero by construction
            A.val[r, col] = 0.0
            if order >= 1:
                A.grad[r, col] = 0.0
            if order >= 2:
                A.hess[r, col] = 0.0
    rows = [B[r] / A[r, r] for r in range(k)]
    x = jt_stack(rows, axis=0)
    if vector_rhs:
        x = x[:, 0]
    return x


def jet_gram_schmidt(vectors, metric: JetArray) -> JetArray:
    """g-orthonormalize jet coordinate-vectors (rows) against a jet metric.

    Modified Gram-Schmidt; raises DependentFrameError when a squared norm
    collapses below 1e-10.  The output is a smooth function of the inputs,
    so orthonormal frames remain differentiable fields.
    """
    if isinstance(vectors, JetArray):
        vecs = [vectors[i] for i in range(vectors.shape[0])]
    else:
        vecs = [v if isinstance(v, JetArray) else JetArray.constant(v, metric.d) for v in vectors]
    out: list[JetArray] = []
    for v in vecs:
        w = v
        for e in out:
            coeff = jt_einsum("i,i->", jt_einsum("ij,j->i", metric, w), e)
            w = w - coeff * e
        nsq = jt_einsum("i,i->", jt_einsum("ij,j->i", metric, w), w)
        if float(nsq.val) < 1e-10:
            raise DependentFrameError(
                f"dependent input vectors (norm collapse, |v|^2 = {float(nsq.val):.3e})"
            )
        out.append(w / jsqrt(nsq))
    return jt_stack(out, axis=0)


def gram_schmidt_extend(candidates, metric: JetArray, target: int) -> JetArray:
    """Orthonormalize, skipping candidates that collapse, until ``target``
    vectors are produced."""
    out: list[JetArray] = []
    for v in candidates:
        if len(out) == target:
            break
        w = v if isinstance(v, JetArray) else JetArray.constant(v, metric.d)
        for e in out:
            coeff = jt_einsum("i,i->", jt_einsum("ij,j->i", metric, w), e)
            w = w - coeff * e
        nsq = jt_einsum("i,i->", jt_einsum("ij,j->i", metric, w), w)
        if float(nsq.val) < 1e-10:
            continue
        out.append(w / jsqrt(nsq))
    if len(out) != target:
        raise DependentFrameError("candidate vectors do not span the required space")
    return jt_stack(out, axis=0)
