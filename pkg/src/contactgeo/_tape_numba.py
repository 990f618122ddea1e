"""Numba tape kernel: the hot path for jet evaluation of expressions.

One call interprets the whole tape for a batch of points, keeping all
register traffic inside compiled code.  No fastmath: results must be
reproducible IEEE double arithmetic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

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
    OP_SUB,
    OP_VAR,
)


@njit(cache=True)
def _kernel(ops, consts, x, seedm, nreg, out_val, out_grad, out_hess, err):  # pragma: no cover - compiled
    P = x.shape[0]
    d = seedm.shape[1]
    nops = ops.shape[0]
    rv = np.empty(nreg)
    rg = np.empty((nreg, d))
    rh = np.empty((nreg, d, d))
    for p in range(P):
        for t in range(nops):
            code = ops[t, 0]
            a = ops[t, 1]
            b = ops[t, 2]
            o = ops[t, 3]
            if code == OP_CONST:
                rv[o] = consts[a]
                for z in range(d):
                    rg[o, z] = 0.0
                    for w in range(d):
                        rh[o, z, w] = 0.0
            elif code == OP_VAR:
                rv[o] = x[p, a]
                for z in range(d):
                    rg[o, z] = seedm[a, z]
                    for w in range(d):
                        rh[o, z, w] = 0.0
            elif code == OP_ADD:
                rv[o] = rv[a] + rv[b]
                for z in range(d):
                    rg[o, z] = rg[a, z] + rg[b, z]
                    for w in range(z + 1):
                        h = rh[a, z, w] + rh[b, z, w]
                        rh[o, z, w] = h
                        rh[o, w, z] = h
            elif code == OP_SUB:
                rv[o] = rv[a] - rv[b]
                for z in range(d):
                    rg[o, z] = rg[a, z] - rg[b, z]
                    for w in range(z + 1):
                        h = rh[a, z, w] - rh[b, z, w]
                        rh[o, z, w] = h
                        rh[o, w, z] = h
            elif code == OP_MUL:
                va = rv[a]
                vb = rv[b]
                rv[o] = va * vb
                for z in range(d):
                    for w in range(z + 1):
                        h = (
                            rh[a, z, w] * vb
                            + rh[b, z, w] * va
                            + rg[a, z] * rg[b, w]
                            + rg[a, w] * rg[b, z]
                        )
                        rh[o, z, w] = h
                        rh[o, w, z] = h
                for z in range(d):
                    rg[o, z] = rg[a, z] * vb + rg[b, z] * va
            elif code == OP_DIV:
                vb = rv[b]
                if vb == 0.0:
                    err[0] = 1
                    err[1] = t
                    return
                q = rv[a] / vb
                rv[o] = q
                for z in range(d):
                    rg[o, z] = (rg[a, z] - q * rg[b, z]) / vb
                for z in range(d):
                    for w in range(z + 1):
                        h = (
                            rh[a, z, w]
                            - rg[o, z] * rg[b, w]
                            - rg[o, w] * rg[b, z]
                            - q * rh[b, z, w]
                        ) / vb
                        rh[o, z, w] = h
                        rh[o, w, z] = h
            elif code == OP_NEG:
                rv[o] = -rv[a]
                for z in range(d):
                    rg[o, z] = -rg[a, z]
                    for w in range(z + 1):
                        h = -rh[a, z, w]
                        rh[o, z, w] = h
                        rh[o, w, z] = h
            elif code == OP_POWI:
                n = b
                va = rv[a]
                if n < 0 and va == 0.0:
                    err[0] = 1
                    err[1] = t
                    return
                v = va**n
                d1 = n * va ** (n - 1)
                if n == 1:
                    d2 = 0.0
                else:
                    d2 = n * (n - 1) * va ** (n - 2)
                rv[o] = v
                for z in range(d):
                    for w in range(z + 1):
                        h = d1 * rh[a, z, w] + d2 * rg[a, z] * rg[a, w]
                        rh[o, z, w] = h
                        rh[o, w, z] = h
                for z in range(d):
                    rg[o, z] = d1 * rg[a, z]
            else:
                va = rv[a]
                if code == OP_EXP:
                    v = np.exp(va)
                    d1 = v
                    d2 = v
                elif code == OP_LOG:
                    if va <= 0.0:
                        err[0] = 2
                        err[1] = t
                        return
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
                else:
                    if va <= 0.0:
                        err[0] = 3
                        err[1] = t
                        return
                    v = np.sqrt(va)
                    d1 = 0.5 / v
                    d2 = -0.25 / (v * va)
                rv[o] = v
                for z in range(d):
                    for w in range(z + 1):
                        h = d1 * rh[a, z, w] + d2 * rg[a, z] * rg[a, w]
                        rh[o, z, w] = h
                        rh[o, w, z] = h
                for z in range(d):
                    rg[o, z] = d1 * rg[a, z]
        last = ops[nops - 1, 3]
        out_val[p] = rv[last]
        for z in range(d):
            out_grad[p, z] = rg[last, z]
            for w in range(d):
                out_hess[p, z, w] = rh[last, z, w]


def execute(ops, consts, x, seedm, nreg):
    P = x.shape[0]
    d = seedm.shape[1]
    out_val = np.empty(P)
    out_grad = np.empty((P, d))
    out_hess = np.empty((P, d, d))
    err = np.zeros(2, dtype=np.int64)
    _kernel(ops, consts, x, seedm, nreg, out_val, out_grad, out_hess, err)
    return out_val, out_grad, out_hess, err
