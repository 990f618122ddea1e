"""Pure-numpy tape interpreter, vectorized over the batch of points.

Fallback path used when numba is unavailable or disabled via the
CONTACTGEO_BACKEND environment variable.  Operation order matches the numba
kernel so both backends apply the same IEEE operations per point.
"""

from __future__ import annotations

import numpy as np

from .tape import (
    OP_ADD,
    OP_CONST,
    OP_COS,
    OP_DIV,
    OP_EXP,
    OP_LOG,
    OP_MUL,
    OP_NEG,
    OP_POWI,
    OP_SIN,
    OP_SQRT,
    OP_SUB,
    OP_VAR,
)


def execute(ops, consts, x, seedm, nreg):
    P, _ = x.shape
    d = seedm.shape[1]
    rv = [None] * nreg
    rg = [None] * nreg
    rh = [None] * nreg
    err = np.zeros(2, dtype=np.int64)
    zeros_g = np.zeros((P, d))
    zeros_h = np.zeros((P, d, d))

    def fail(code, t):
        err[0] = code
        err[1] = t
        return None, None, None, err

    def outer_sym(a, b):
        m = a[:, :, None] * b[:, None, :]
        return m + np.swapaxes(m, 1, 2)

    for t in range(ops.shape[0]):
        code, a, b, o = ops[t]
        if code == OP_CONST:
            rv[o] = np.full(P, consts[a])
            rg[o] = zeros_g
            rh[o] = zeros_h
        elif code == OP_VAR:
            rv[o] = x[:, a].copy()
            rg[o] = np.broadcast_to(seedm[a], (P, d))
            rh[o] = zeros_h
        elif code == OP_ADD:
            rv[o] = rv[a] + rv[b]
            rg[o] = rg[a] + rg[b]
            rh[o] = rh[a] + rh[b]
        elif code == OP_SUB:
            rv[o] = rv[a] - rv[b]
            rg[o] = rg[a] - rg[b]
            rh[o] = rh[a] - rh[b]
        elif code == OP_MUL:
            va, vb = rv[a], rv[b]
            rv[o] = va * vb
            rg[o] = rg[a] * vb[:, None] + rg[b] * va[:, None]
            rh[o] = (
                rh[a] * vb[:, None, None]
                + rh[b] * va[:, None, None]
                + outer_sym(rg[a], rg[b])
            )
        elif code == OP_DIV:
            vb = rv[b]
            if np.any(vb == 0.0):
                return fail(1, t)
            q = rv[a] / vb
            gq = (rg[a] - q[:, None] * rg[b]) / vb[:, None]
            hq = (
                rh[a] - outer_sym(gq, rg[b]) - q[:, None, None] * rh[b]
            ) / vb[:, None, None]
            rv[o], rg[o], rh[o] = q, gq, hq
        elif code == OP_NEG:
            rv[o] = -rv[a]
            rg[o] = -rg[a]
            rh[o] = -rh[a]
        elif code == OP_POWI:
            n = int(b)
            va = rv[a]
            if n < 0 and np.any(va == 0.0):
                return fail(1, t)
            v = va**n
            d1 = n * va ** (n - 1)
            d2 = 0.0 * va if n == 1 else n * (n - 1) * va ** (n - 2)
            rv[o] = v
            rg[o] = d1[:, None] * rg[a]
            m = rg[a][:, :, None] * rg[a][:, None, :]
            rh[o] = d1[:, None, None] * rh[a] + d2[:, None, None] * m
        else:
            va = rv[a]
            if code == OP_EXP:
                v = np.exp(va)
                d1 = v
                d2 = v
            elif code == OP_LOG:
                if np.any(va <= 0.0):
                    return fail(2, t)
                v = np.log(va)
                d1 = 1.0 / va
                d2 = -1.0 / (va * va)
            elif code == OP_SIN:
                v = np.sin(va)
                d1 = np.cos(va)
                d2 = -v
            elif code == OP_COS:
                v = np.cos(va)
                d1 = -np.sin(va)
                d2 = -v
            elif code == OP_SQRT:
                if np.any(va <= 0.0):
                    return fail(3, t)
                v = np.sqrt(va)
                d1 = 0.5 / v
                d2 = -0.25 / (v * va)
            else:  # pragma: no cover - unknown opcode
                raise AssertionError(f"bad opcode {code}")
            rv[o] = v
            rg[o] = d1[:, None] * rg[a]
            m = rg[a][:, :, None] * rg[a][:, None, :]
            rh[o] = d1[:, None, None] * rh[a] + d2[:, None, None] * m

    last = ops[-1, 3]
    hess = rh[last]
    # mirror the upper triangle so symmetry is bitwise exact, as in the kernel
    iu = np.triu_indices(d, 1)
    hess = hess.copy()
    hess[:, iu[1], iu[0]] = hess[:, iu[0], iu[1]]
    return rv[last].copy(), np.array(rg[last]), hess, err
