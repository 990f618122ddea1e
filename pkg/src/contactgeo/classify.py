"""Classification predicates for ACM and AH structures.

Classification is sampled falsification, never proof: a verdict of ``holds``
means the defining identity's residual stayed below tolerance at every
sampled point and vector tuple.  Reports carry the seed and the worst
witness so results are reproducible and refutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .structures import AcmPointData, AhPointData
from .util import Sampling, random_unit_vectors, residual, verdict_for
from .manifold import sample_points


@dataclass
class ClassReport:
    class_id: str
    verdict: str
    max_residual: float
    tolerance: float
    points: int
    vectors: int
    seed: int
    witness_point_index: int
    witness_point: tuple
    witness_vectors: tuple
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {
            "class_id": self.class_id,
            "verdict": self.verdict,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "samples": {
                "points": self.points,
                "vectors": self.vectors,
                "seed": self.seed,
            },
            "witness": {
                "point_index": self.witness_point_index,
                "point": [float(x) for x in self.witness_point],
                "vectors": [[float(x) for x in v] for v in self.witness_vectors],
            },
        }
        if self.extra:
            doc["extra"] = {k: float(v) for k, v in self.extra.items()}
        return doc


@dataclass(frozen=True)
class ClassSpec:
    class_id: str
    kind: str  # "acm" or "ah"
    arity: int  # tangent vectors per tuple
    evaluator: Callable  # (ctx, vectors, extra) -> residual
    fits_alpha: bool = False


def _phi_apply(ctx, v):
    return ctx.phi.val @ v


def _pairing(ctx, x, y):
    return float(x @ ctx.geo.gval @ y)


def _eta(ctx, v):
    return float(ctx.eta.val @ v)


def _form(ctx, x, y):
    return float(x @ ctx.phiform.val @ y)


def _contract3(t, x, y, z):
    return float(np.einsum("ijk,i,j,k->", t, x, y, z))


def _wedge12_value(a, b, x, y, z):
    # (a ^ b)(X,Y,Z) with the 1/3 normalization
    return (
        (a @ x) * float(y @ b @ z)
        + (a @ y) * float(z @ b @ x)
        + (a @ z) * float(x @ b @ y)
    ) / 3.0


def _wedge11_value(a, b, x, y):
    return 0.5 * ((a @ x) * (b @ y) - (a @ y) * (b @ x))


def _nabla_phi_of(ctx, x, y):
    """((nabla_X phi) Y) as a value vector."""
    return np.einsum("zkj,z,j->k", ctx.nabla_phi.val, x, y)


def _nabla_phiform_of(ctx, x, y, z):
    return float(np.einsum("zab,z,a,b->", ctx.nabla_phiform.val, x, y, z))


def _nabla_eta_of(ctx, x, y):
    return float(np.einsum("za,z,a->", ctx.nabla_eta.val, x, y))


# ---- ACM class evaluators ----


def _ev_lc_almost_quasi_sasakian(ctx: AcmPointData, vecs, extra):
    x, y, z = vecs
    lhs = _contract3(ctx.dphi.val, x, y, z)
    rhs = -2.0 * _wedge12_value(ctx.lee.val, ctx.phiform.val, x, y, z)
    return residual(lhs, rhs)


def _ev_almost_cosymplectic(ctx, vecs, extra):
    x, y, z = vecs
    r1 = residual(_contract3(ctx.dphi.val, x, y, z), 0.0)
    r2 = residual(float(x @ ctx.deta.val @ y), 0.0)
    return max(r1, r2)


def _ev_quasi_sasakian(ctx, vecs, extra):
    x, y, z = vecs
    r = residual(_contract3(ctx.dphi.val, x, y, z), 0.0)
    nij = np.einsum("kij,i,j->k", ctx.nijenhuis.val, x, y)
    lhs = nij + 2.0 * float(x @ ctx.deta.val @ y) * ctx.xi.val
    r = max(r, residual(lhs, np.zeros_like(lhs), ctx.geo.gval))
    if ctx.structure.chart.dim >= 5:
        lhs = _nabla_phiform_of(ctx, x, y, z)
        rhs = _eta(ctx, y) * _nabla_eta_of(ctx, _phi_apply(ctx, x), z) + _eta(
            ctx, z
        ) * _nabla_eta_of(ctx, y, _phi_apply(ctx, x))
        r = max(r, residual(lhs, rhs))
    return r


def _alpha_residual(ctx, x, y, alpha):
    lhs = _nabla_phi_of(ctx, x, y)
    rhs = alpha * (_pairing(ctx, x, y) * ctx.xi.val - _eta(ctx, y) * x)
    return residual(lhs, rhs, ctx.geo.gval)


def fit_alpha(ctx, tuples) -> float:
    """Least-squares fit of the structure constant in the C6 identity."""
    num = 0.0
    den = 0.0
    g = ctx.geo.gval
    for x, y in tuples:
        lhs = _nabla_phi_of(ctx, x, y)
        basis = _pairing(ctx, x, y) * ctx.xi.val - _eta(ctx, y) * x
        num += float(lhs @ g @ basis)
        den += float(basis @ g @ basis)
    return num / den if den > 1e-14 else 0.0


def _ev_alpha_sasakian(ctx, vecs, extra):
    x, y = vecs
    return _alpha_residual(ctx, x, y, extra["alpha"])


def _ev_cosymplectic(ctx, vecs, extra):
    x, y = vecs
    lhs = _nabla_phi_of(ctx, x, y)
    return residual(lhs, np.zeros_like(lhs), ctx.geo.gval)


def _ev_c12(ctx, vecs, extra):
    x, y = vecs
    lhs = _nabla_phi_of(ctx, x, y)
    nxx = ctx.nabla_xi_xi.val
    rhs = -_eta(ctx, x) * (
        float(ctx.nabla_xi_eta.val @ _phi_apply(ctx, y)) * ctx.xi.val
        + _eta(ctx, y) * _phi_apply(ctx, nxx)
    )
    return residual(lhs, rhs, ctx.geo.gval)


def _ev_lc_almost_cosymplectic(ctx, vecs, extra):
    x, y, z = vecs
    r = _ev_lc_almost_quasi_sasakian(ctx, vecs, extra)
    lhs = float(x @ ctx.deta.val @ y)
    rhs = _wedge11_value(ctx.eta.val, ctx.lee.val, x, y)
    return max(r, residual(lhs, rhs))


def _ev_lc_cosymplectic(ctx, vecs, extra):
    x, y, z = vecs
    om = ctx.lee.val
    lhs = _nabla_phiform_of(ctx, x, y, z)
    rhs = (
        float(om @ y) * _form(ctx, x, z)
        - float(om @ z) * _form(ctx, x, y)
        + float(om @ _phi_apply(ctx, y)) * _pairing(ctx, x, z)
        - float(om @ _phi_apply(ctx, z)) * _pairing(ctx, x, y)
    )
    return residual(lhs, rhs)


def _ev_c4_c6_c7(ctx, vecs, extra):
    x, y, z = vecs
    om = ctx.lee.val
    px, py, pz = _phi_apply(ctx, x), _phi_apply(ctx, y), _phi_apply(ctx, z)
    lhs = _nabla_phiform_of(ctx, x, y, z)
    rhs = (
        float(om @ y) * _form(ctx, x, z)
        - float(om @ z) * _form(ctx, x, y)
        + float(om @ py) * _pairing(ctx, px, pz)
        - float(om @ pz) * _pairing(ctx, px, py)
        + _eta(ctx, y) * _nabla_eta_of(ctx, px, z)
        + _eta(ctx, z) * _nabla_eta_of(ctx, y, px)
    )
    return residual(lhs, rhs)


def _ev_normality(ctx, vecs, extra):
    x, y = vecs[0], vecs[1]
    nij = np.einsum("kij,i,j->k", ctx.nijenhuis.val, x, y)
    lhs = nij + 2.0 * float(x @ ctx.deta.val @ y) * ctx.xi.val
    return residual(lhs, np.zeros_like(lhs), ctx.geo.gval)


# ---- AH class evaluators ----


def _ev_kahler(ctx: AhPointData, vecs, extra):
    x, y, z = vecs
    lhs = float(np.einsum("zab,z,a,b->", ctx.nabla_omega.val, x, y, z))
    return residual(lhs, 0.0)


def _ev_almost_kahler(ctx, vecs, extra):
    x, y, z = vecs
    return residual(_contract3(ctx.domega.val, x, y, z), 0.0)


def _ev_w2_w4(ctx, vecs, extra):
    x, y, z = vecs
    lhs = _contract3(ctx.domega.val, x, y, z)
    if ctx.structure.n < 2:
        return residual(lhs, 0.0)
    rhs = -2.0 * _wedge12_value(ctx.lee.val, ctx.omega.val, x, y, z)
    return residual(lhs, rhs)


def _ev_w4(ctx, vecs, extra):
    x, y, z = vecs
    r = _ev_w2_w4(ctx, vecs, extra)
    nij = np.einsum("kij,i,j->k", ctx.nijenhuis.val, x, y)
    return max(r, residual(nij, np.zeros_like(nij), ctx.geo.gval))


ACM_CLASSES = {
    "lc_almost_quasi_sasakian": ClassSpec(
        "lc_almost_quasi_sasakian", "acm", 3, _ev_lc_almost_quasi_sasakian
    ),
    "almost_cosymplectic": ClassSpec("almost_cosymplectic", "acm", 3, _ev_almost_cosymplectic),
    "quasi_sasakian": ClassSpec("quasi_sasakian", "acm", 3, _ev_quasi_sasakian),
    "alpha_sasakian": ClassSpec("alpha_sasakian", "acm", 2, _ev_alpha_sasakian, fits_alpha=True),
    "cosymplectic": ClassSpec("cosymplectic", "acm", 2, _ev_cosymplectic),
    "C12": ClassSpec("C12", "acm", 2, _ev_c12),
    "lc_almost_cosymplectic": ClassSpec(
        "lc_almost_cosymplectic", "acm", 3, _ev_lc_almost_cosymplectic
    ),
    "lc_cosymplectic": ClassSpec("lc_cosymplectic", "acm", 3, _ev_lc_cosymplectic),
    "C4_C6_C7": ClassSpec("C4_C6_C7", "acm", 3, _ev_c4_c6_c7),
    "normality": ClassSpec("normality", "acm", 2, _ev_normality),
}

AH_CLASSES = {
    "kahler": ClassSpec("kahler", "ah", 3, _ev_kahler),
    "almost_kahler": ClassSpec("almost_kahler", "ah", 3, _ev_almost_kahler),
    "W2_W4": ClassSpec("W2_W4", "ah", 3, _ev_w2_w4),
    "W4": ClassSpec("W4", "ah", 3, _ev_w4),
}

CLASS_IDS = tuple(list(ACM_CLASSES) + list(AH_CLASSES))


def applicable_classes(structure) -> tuple:
    return tuple(ACM_CLASSES if structure.kind == "acm" else AH_CLASSES)


def classify(structure, class_id: str, sampling: Sampling = Sampling()) -> ClassReport:
    """Evaluate one class's defining identity over the sampling budget."""
    table = ACM_CLASSES if structure.kind == "acm" else AH_CLASSES
    if class_id not in table:
        other = AH_CLASSES if structure.kind == "acm" else ACM_CLASSES
        if class_id in other:
            raise ValueError(
                f"class '{class_id}' does not apply to a {structure.kind} structure"
            )
        raise ValueError(f"unknown class id '{class_id}'")
    spec = table[class_id]
    pts = sample_points(structure.chart, sampling.points, sampling.seed)
    rng = np.random.default_rng(sampling.seed ^ 0x5EED)
    extra: dict = {}
    tuples_by_point = []
    for ps in pts:
        ctx = structure.at(ps)
        tuples = [
            tuple(random_unit_vectors(rng, ctx.geo.gval, spec.arity))
            for _ in range(sampling.vectors)
        ]
        tuples_by_point.append(tuples)
    if spec.fits_alpha:
        ctx0 = structure.at(pts[0])
        alpha = fit_alpha(ctx0, tuples_by_point[0])
        extra["alpha"] = alpha
        per_point = [
            fit_alpha(structure.at(ps), tuples_by_point[i]) for i, ps in enumerate(pts)
        ]
        extra["alpha_spread"] = float(np.max(np.abs(np.array(per_point) - alpha)))
    worst = (-1.0, 0, pts[0].point, tuples_by_point[0][0])
    for i, ps in enumerate(pts):
        ctx = structure.at(ps)
        for tup in tuples_by_point[i]:
            res = spec.evaluator(ctx, tup, extra)
            if res > worst[0]:
                worst = (res, i, ps.point, tup)
    max_res, widx, wpoint, wvecs = worst
    return ClassReport(
        class_id=class_id,
        verdict=verdict_for(max_res, sampling.tol),
        max_residual=max_res,
        tolerance=sampling.tol,
        points=sampling.points,
        vectors=sampling.vectors,
        seed=sampling.seed,
        witness_point_index=widx,
        witness_point=wpoint,
        witness_vectors=tuple(tuple(v) for v in wvecs),
        extra=extra,
    )


def classify_all(structure, sampling: Sampling = Sampling()) -> list[ClassReport]:
    return [classify(structure, cid, sampling) for cid in applicable_classes(structure)]
