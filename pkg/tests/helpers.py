"""Shared test utilities: random polynomial generation and an independent
finite-difference oracle for jet derivatives.

The oracle evaluates polynomials in exact rational arithmetic, so the
Richardson-extrapolated central differences with step 1e-5 carry no
truncation error for degree <= 4 and no rounding error beyond the final
conversion to float.  It never touches the jet evaluation path.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from contactgeo.expr import ScalarFieldExpr, parse

FD_STEP = Fraction(1, 100_000)


def random_polynomial(rng: np.random.Generator, max_vars: int = 5, max_deg: int = 4):
    """A random polynomial expression string plus its variable list."""
    nv = int(rng.integers(1, max_vars + 1))
    names = [f"x{i + 1}" for i in range(nv)]
    terms = []
    for _ in range(int(rng.integers(2, 7))):
        coeff = float(np.round(rng.uniform(-2.0, 2.0), 3)) or 0.5
        total = int(rng.integers(0, max_deg + 1))
        exps = [0] * nv
        for _ in range(total):
            exps[int(rng.integers(0, nv))] += 1
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        term = "*".join([repr(coeff)] + factors)
        terms.append(term)
    return " + ".join(terms), names


def _richardson(coarse: Fraction, fine: Fraction) -> Fraction:
    return (4 * fine - coarse) / 3


def fd_jet(expr: ScalarFieldExpr, names, point) -> tuple[float, np.ndarray, np.ndarray]:
    """Gradient and Hessian by Richardson-extrapolated central differences."""
    base = {n: Fraction(float(x)) for n, x in zip(names, point)}

    def f(shift: dict) -> Fraction:
        pt = dict(base)
        for k, dv in shift.items():
            pt[k] = pt[k] + dv
        return expr.eval_fraction(pt)

    nv = len(names)
    f0 = f({})
    grad = np.empty(nv)
    hess = np.empty((nv, nv))
    for i, ni in enumerate(names):
        def d1(h: Fraction) -> Fraction:
            return (f({ni: h}) - f({ni: -h})) / (2 * h)

        def d2(h: Fraction) -> Fraction:
            return (f({ni: h}) - 2 * f0 + f({ni: -h})) / (h * h)

        grad[i] = float(_richardson(d1(FD_STEP), d1(FD_STEP / 2)))
        hess[i, i] = float(_richardson(d2(FD_STEP), d2(FD_STEP / 2)))
        for j in range(i):
            nj = names[j]

            def cross(h: Fraction) -> Fraction:
                return (
                    f({ni: h, nj: h})
                    + f({ni: -h, nj: -h})
                    - f({ni: h, nj: -h})
                    - f({ni: -h, nj: h})
                ) / (4 * h * h)

            hess[i, j] = hess[j, i] = float(_richardson(cross(FD_STEP), cross(FD_STEP / 2)))
    return float(f0), grad, hess


def jet_vs_fd_error(source: str, names, point) -> float:
    """Worst relative disagreement between the jet path and the FD oracle."""
    expr = parse(source)
    jet = expr.eval_jet(dict(zip(names, point)), seed=names)
    val, grad, hess = fd_jet(expr, names, point)
    errs = [
        abs(jet.value - val) / (1.0 + abs(val)),
        np.max(np.abs(jet.grad - grad)) / (1.0 + np.max(np.abs(grad))),
        np.max(np.abs(jet.hess - hess)) / (1.0 + np.max(np.abs(hess))),
    ]
    return float(max(errs))


def kenmotsu_like(dim: int):
    """Expanding pair planes over the Reeb direction; eta is not co-closed."""
    from contactgeo.manifold import ChartManifold, CovectorField, EndoField, VectorField
    from contactgeo.structures import AcmStructure

    pairs = (dim - 1) // 2
    coords = [f"x{i}" for i in range(2 * pairs)] + ["c"]
    g = [["0"] * dim for _ in range(dim)]
    for i in range(2 * pairs):
        g[i][i] = "exp(2*c)"
    g[dim - 1][dim - 1] = "1"
    phi = [["0"] * dim for _ in range(dim)]
    for k in range(pairs):
        phi[2 * k][2 * k + 1] = "-1"
        phi[2 * k + 1][2 * k] = "1"
    ch = ChartManifold(coords, g)
    return AcmStructure(ch, EndoField(ch, phi),
                        VectorField(ch, ["0"] * (dim - 1) + ["1"]),
                        CovectorField(ch, ["0"] * (dim - 1) + ["1"]))
