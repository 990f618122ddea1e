"""Registry of submersion identities and the sampling verifier.

Each record carries the identity id used by the CLI, the vector-slot
signature, an evaluator returning one or more scale-normalized residuals,
a short displayable form of the identity, and applicability preconditions
(class of the total space, minimum fibre rank, minimum base dimension).
An identity whose precondition fails is reported as not applicable, never
as a failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .classify import ACM_CLASSES, classify, fit_alpha
from .errors import UnknownIdentityError
from .manifold import sample_points
from .submersion import SubmersionPointData, SubmersionSpec
from .util import Sampling, random_unit_vectors, residual, verdict_for


@dataclass(frozen=True)
class IdentityRecord:
    id: str
    slots: str  # one letter per tangent slot: h, v, a (total), b (base)
    evaluator: Callable
    ref: str
    total_class: Optional[str] = None
    min_r: int = 0
    min_n: int = 0


@dataclass
class VerificationReport:
    identity: str
    ref: str
    verdict: str  # holds | fails | inconclusive | not_applicable
    max_residual: float
    tolerance: float
    points: int
    vectors: int
    seed: int
    witness_point_index: int = -1
    witness_point: tuple = ()
    witness_vectors: tuple = ()
    reason: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        res = self.max_residual
        doc = {
            "identity": self.identity,
            "reference": self.ref,
            "verdict": self.verdict,
            "max_residual": None if res != res else res,
            "tolerance": self.tolerance,
            "samples": {"points": self.points, "vectors": self.vectors, "seed": self.seed},
        }
        if self.verdict == "not_applicable":
            doc["reason"] = self.reason
        else:
            doc["witness"] = {
                "point_index": self.witness_point_index,
                "point": [float(x) for x in self.witness_point],
                "vectors": [[float(x) for x in v] for v in self.witness_vectors],
            }
        if self.extra:
            doc["extra"] = {k: float(v) for k, v in self.extra.items()}
        return doc


def _nabla_phi_of(sp: SubmersionPointData, x, y) -> np.ndarray:
    return np.einsum("zkj,z,j->k", sp.total_ctx.nabla_phi.val, x, y)


def _nijenhuis_of(sp, x, y) -> np.ndarray:
    return np.einsum("kij,i,j->k", sp.total_ctx.nijenhuis.val, x, y)


def _fibre_ctx(sp: SubmersionPointData):
    fs = sp.spec.fibre(sp.spec.base_point(sp.point))
    return fs.at(sp.point[sp.spec.n_base :])


def _to_fibre(sp, v) -> np.ndarray:
    return np.asarray(v, dtype=float)[sp.spec.n_base :]


# ---- evaluators; each returns a list of residuals ----


def _ev_deta(sp, vecs, env):
    return [residual(float(sp.total_ctx.delta_eta.val), 0.0)]


def _ev_axu(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    lhs = sp.oneill_a(x, u)
    rhs = sp.eta(u) * sp.oneill_a(x, xi) - sp.omega(sp.phi(u)) * sp.phi(x)
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_axy(sp, vecs, env):
    x, y = vecs
    xi = sp.total_ctx.xi.val
    a = sp.oneill_a(x, y)
    rhs = sp.g(a, xi) * xi + sp.form(x, y) * sp.v_phi_lee
    return [residual(a, rhs, sp.total_ctx.geo.gval)]


def _ev_aphi(sp, vecs, env):
    # both compatibility relations of the integrability tensor with phi
    x, u, y = vecs
    xi = sp.total_ctx.xi.val
    g = sp.total_ctx.geo.gval
    lhs = sp.oneill_a(sp.phi(x), u) - sp.phi(sp.oneill_a(x, u))
    rhs = sp.eta(u) * (sp.oneill_a(sp.phi(x), xi) - sp.phi(sp.oneill_a(x, xi)))
    diff = sp.oneill_a(x, y) - sp.oneill_a(sp.phi(x), sp.phi(y))
    return [
        residual(lhs, rhs, g),
        residual(diff, sp.g(diff, xi) * xi, g),
    ]


def _ev_eq10(sp, vecs, env):
    x, y, u = vecs
    lhs = sp.g(sp.oneill_a(x, y), sp.phi(u))
    rhs = sp.omega(u) * sp.g(x, sp.phi(y))
    return [residual(lhs, rhs)]


def _ev_fibre_lee(sp, vecs, env):
    (u,) = vecs
    fctx = _fibre_ctx(sp)
    uhat = _to_fibre(sp, u)
    lee_hat = float(fctx.lee.val @ uhat)
    if sp.spec.r >= 2:
        rhs = sp.omega(u)
    else:
        rhs = float(sp.total_ctx.nabla_xi_eta.val @ u)
    return [residual(lee_hat, rhs)]


def _ev_beta_push(sp, vecs, env):
    (x,) = vecs
    beta = sp.base_ctx.lee.val
    lhs = float(beta @ sp.pushforward(x))
    return [residual(lhs, sp.omega(x))]


def _ev_h1(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    lhs = sp.h_value(_nabla_phi_of(sp, x, u))
    rhs = (
        sp.omega(u) * sp.phi(x)
        - sp.omega(sp.phi(u)) * x
        - sp.eta(u) * sp.phi(sp.oneill_a(x, xi))
    )
    return [residual(lhs, sp.h_value(rhs), sp.total_ctx.geo.gval)]


def _ev_h2(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    lhs = sp.h_value(_nabla_phi_of(sp, u, x))
    rhs = sp.eta(u) * (sp.oneill_a(sp.phi(x), xi) - sp.phi(sp.oneill_a(x, xi)))
    return [residual(lhs, sp.h_value(rhs), sp.total_ctx.geo.gval)]


def _ev_v1(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    txix = sp.oneill_t(xi, x)
    lhs = sp.v_value(_nabla_phi_of(sp, x, u))
    rhs = -sp.eta(u) * sp.phi(txix) - sp.g(txix, sp.phi(u)) * xi
    return [residual(lhs, sp.v_value(rhs), sp.total_ctx.geo.gval)]


def _ev_v2(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    lhs = sp.v_value(_nabla_phi_of(sp, u, x))
    txix = sp.oneill_t(xi, x)
    txiphix = sp.oneill_t(xi, sp.phi(x))
    phi2u = sp.phi(sp.phi(u))
    rhs = (
        sp.eta(u) * (txiphix - sp.phi(txix))
        + sp.omega(x) * sp.phi(u)
        + sp.omega(sp.phi(x)) * phi2u
        + 0.5 * _nijenhuis_of(sp, x, sp.phi(u))
    )
    return [residual(lhs, sp.v_value(rhs), sp.total_ctx.geo.gval)]


def _ev_sum_consistency(sp, vecs, env):
    # the stated h-part plus the stated v-part must rebuild (nabla_X phi) U
    x, u = vecs
    xi = sp.total_ctx.xi.val
    txix = sp.oneill_t(xi, x)
    h_part = (
        sp.omega(u) * sp.phi(x)
        - sp.omega(sp.phi(u)) * x
        - sp.eta(u) * sp.phi(sp.oneill_a(x, xi))
    )
    v_part = -sp.eta(u) * sp.phi(txix) - sp.g(txix, sp.phi(u)) * xi
    direct = _nabla_phi_of(sp, x, u)
    rhs = sp.h_value(h_part) + sp.v_value(v_part)
    return [residual(direct, rhs, sp.total_ctx.geo.gval)]


def _ev_t20(sp, vecs, env):
    u, v = vecs
    xi = sp.total_ctx.xi.val
    lhs = sp.oneill_t(u, sp.phi(v)) - sp.oneill_t(sp.phi(u), v)
    rhs = (
        sp.eta(u) * sp.oneill_t(sp.phi(v), xi)
        - sp.eta(v) * sp.oneill_t(sp.phi(u), xi)
        + 2.0 * sp.form(u, v) * sp.h_lee
    )
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_mean(sp, vecs, env):
    lhs = sp.mean_curvature
    rhs = 2.0 * sp.spec.r * sp.h_lee + sp.t_xi_xi
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_a_zero(sp, vecs, env):
    x, y = vecs
    a = sp.oneill_a(x, y)
    return [residual(a, np.zeros_like(a), sp.total_ctx.geo.gval)]


def _ev_txi_zero(sp, vecs, env):
    (e,) = vecs
    xi = sp.total_ctx.xi.val
    t = sp.oneill_t(xi, e)
    return [residual(t, np.zeros_like(t), sp.total_ctx.geo.gval)]


def _ev_minimal(sp, vecs, env):
    n = sp.mean_curvature
    return [residual(n, np.zeros_like(n), sp.total_ctx.geo.gval)]


def _ev_nabla_xu_zero(sp, vecs, env):
    x, u = vecs
    lhs = _nabla_phi_of(sp, x, u)
    return [residual(lhs, np.zeros_like(lhs), sp.total_ctx.geo.gval)]


def _ev_nabla_ux_nij(sp, vecs, env):
    x, u = vecs
    lhs = _nabla_phi_of(sp, u, x)
    rhs = 0.5 * _nijenhuis_of(sp, x, sp.phi(u))
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _base_vecs(sp, vecs):
    return vecs


def _ev_base_dOmega(sp, vecs, env):
    x, y, z = vecs
    lhs = float(np.einsum("ijk,i,j,k->", sp.base_ctx.domega.val, x, y, z))
    return [residual(lhs, 0.0)]


def _ev_base_kahler(sp, vecs, env):
    x, y, z = vecs
    lhs = float(np.einsum("zab,z,a,b->", sp.base_ctx.nabla_omega.val, x, y, z))
    return [residual(lhs, 0.0)]


def _wedge12_value(a, b, x, y, z):
    return (
        (a @ x) * float(y @ b @ z)
        + (a @ y) * float(z @ b @ x)
        + (a @ z) * float(x @ b @ y)
    ) / 3.0


def _ev_base_w2w4(sp, vecs, env):
    x, y, z = vecs
    bc = sp.base_ctx
    lhs = float(np.einsum("ijk,i,j,k->", bc.domega.val, x, y, z))
    if bc.structure.n < 2:
        return [residual(lhs, 0.0)]
    rhs = -2.0 * _wedge12_value(bc.lee.val, bc.omega.val, x, y, z)
    out = [residual(lhs, rhs)]
    dbeta = float(x @ bc.dlee.val @ y)
    out.append(residual(dbeta, 0.0))
    return out


def _ev_base_w4(sp, vecs, env):
    x, y, z = vecs
    bc = sp.base_ctx
    if bc.structure.n < 2:
        return _ev_base_kahler(sp, vecs, env)
    out = _ev_base_w2w4(sp, vecs, env)
    nij = np.einsum("kij,i,j->k", bc.nijenhuis.val, x, y)
    out.append(residual(nij, np.zeros_like(nij), bc.geo.gval))
    return out


def _ev_t32_a(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    a_phix_u = sp.oneill_a(sp.phi(x), u)
    phi_a = sp.phi(sp.oneill_a(x, u))
    lhs55 = sp.oneill_a(x, sp.phi(u)) - phi_a
    rhs55 = -sp.eta(u) * sp.oneill_a(sp.phi(x), xi)
    g = sp.total_ctx.geo.gval
    return [
        residual(a_phix_u, phi_a, g),
        residual(phi_a, sp.eta(u) * sp.oneill_a(sp.phi(x), xi), g),
        residual(lhs55, rhs55, g),
    ]


def _ev_t32_t(sp, vecs, env):
    u, v = vecs
    xi = sp.total_ctx.xi.val
    g = sp.total_ctx.geo.gval
    r1 = residual(
        sp.oneill_t(xi, sp.phi(u)), sp.phi(sp.oneill_t(xi, u)), g
    )
    lhs = sp.oneill_t(u, sp.phi(v)) - sp.phi(sp.oneill_t(u, v))
    rhs = -sp.eta(v) * sp.oneill_t(xi, sp.phi(u))
    return [r1, residual(lhs, rhs, g)]


def _ev_t32_nabla_u(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    lhs = _nabla_phi_of(sp, u, x)
    rhs = sp.g(sp.oneill_t(xi, sp.phi(u)), x) * xi
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_t32_nabla_x(sp, vecs, env):
    x, u = vecs
    xi = sp.total_ctx.xi.val
    lhs = sp.v_value(_nabla_phi_of(sp, x, u))
    rhs = -sp.eta(u) * sp.phi(sp.oneill_t(xi, x)) + sp.g(
        sp.phi(sp.oneill_t(xi, u)), x
    ) * xi
    return [residual(lhs, sp.v_value(rhs), sp.total_ctx.geo.gval)]


def _ev_t36_a(sp, vecs, env):
    x, y = vecs
    xi = sp.total_ctx.xi.val
    alpha = env.get("alpha", 0.0)
    lhs = sp.oneill_a(x, y)
    rhs = -alpha * sp.form(x, y) * xi
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_t36_t(sp, vecs, env):
    u, v = vecs
    g = sp.total_ctx.geo.gval
    return [residual(sp.oneill_t(u, sp.phi(v)), sp.phi(sp.oneill_t(u, v)), g)]


def _ev_t33_t60(sp, vecs, env):
    u, v = vecs
    g = sp.total_ctx.geo.gval
    lhs = sp.oneill_t(u, sp.phi(v))
    rhs = sp.phi(sp.oneill_t(u, v)) - sp.eta(u) * sp.eta(v) * sp.phi(sp.t_xi_xi)
    return [residual(lhs, rhs, g)]


def _ev_t33_t61(sp, vecs, env):
    u, v = vecs
    g = sp.total_ctx.geo.gval
    lhs = sp.oneill_t(u, v) + sp.oneill_t(sp.phi(u), sp.phi(v))
    rhs = sp.eta(u) * sp.eta(v) * sp.t_xi_xi
    return [residual(lhs, rhs, g)]


def _ev_t33_n62(sp, vecs, env):
    u, x = vecs
    xi = sp.total_ctx.xi.val
    lhs = _nabla_phi_of(sp, u, x)
    rhs = -sp.eta(u) * sp.g(sp.t_xi_xi, sp.phi(x)) * xi
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_s4a_a(sp, vecs, env):
    x, y = vecs
    lhs = sp.oneill_a(x, y)
    rhs = sp.form(x, y) * sp.v_phi_lee
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_s4a_mean(sp, vecs, env):
    return [residual(sp.h_lee, sp.t_xi_xi, sp.total_ctx.geo.gval)]


def _ev_s4b_t(sp, vecs, env):
    u, x = vecs
    xi = sp.total_ctx.xi.val
    g = sp.total_ctx.geo.gval
    r1 = residual(sp.oneill_t(xi, u), sp.eta(u) * sp.t_xi_xi, g)
    r2 = residual(sp.oneill_t(xi, x), -sp.omega(x) * xi, g)
    return [r1, r2]


def _ev_s4c_a(sp, vecs, env):
    x, u = vecs
    g = sp.total_ctx.geo.gval
    r1 = residual(sp.oneill_a(sp.phi(x), u), sp.phi(sp.oneill_a(x, u)), g)
    return [r1]


def _ev_s4c_a2(sp, vecs, env):
    x, y = vecs
    g = sp.total_ctx.geo.gval
    return [residual(sp.oneill_a(x, y), sp.oneill_a(sp.phi(x), sp.phi(y)), g)]


def _ev_s4c_t(sp, vecs, env):
    (e,) = vecs
    xi = sp.total_ctx.xi.val
    g = sp.total_ctx.geo.gval
    return [residual(sp.oneill_t(xi, sp.phi(e)), sp.phi(sp.oneill_t(xi, e)), g)]


def _ev_umbilic(sp, vecs, env):
    u, v = vecs
    uu, vv = sp.v_value(u), sp.v_value(v)
    lhs = sp.oneill_t(uu, vv)
    rhs = sp.g(uu, vv) / (2.0 * sp.spec.r + 1.0) * sp.mean_curvature
    return [residual(lhs, rhs, sp.total_ctx.geo.gval)]


def _ev_superminimal(sp, vecs, env):
    u, e = vecs
    lhs = _nabla_phi_of(sp, u, e)
    return [residual(lhs, np.zeros_like(lhs), sp.total_ctx.geo.gval)]


# fibre-structure identities reuse the classification evaluators on the
# induced fibre structure at the sampled point


def _fibre_class_residual(sp, vecs, env, class_id, arity):
    fctx = _fibre_ctx(sp)
    fv = [_to_fibre(sp, v) for v in vecs[:arity]]
    spec = ACM_CLASSES[class_id]
    extra = {}
    if spec.fits_alpha:
        extra["alpha"] = fit_alpha(fctx, [tuple(fv)])
    return [spec.evaluator(fctx, tuple(fv), extra)]


def _ev_t31_fibre(sp, vecs, env):
    return _fibre_class_residual(sp, vecs, env, "almost_cosymplectic", 3)


def _ev_t32_fibre(sp, vecs, env):
    return _fibre_class_residual(sp, vecs, env, "quasi_sasakian", 3)


def _ev_t36_fibre(sp, vecs, env):
    return _fibre_class_residual(sp, vecs, env, "alpha_sasakian", 2)


def _ev_t33_fibre(sp, vecs, env):
    return _fibre_class_residual(sp, vecs, env, "C12", 2)


def _ev_s4a_fibre(sp, vecs, env):
    if sp.spec.r >= 2:
        return _fibre_class_residual(sp, vecs, env, "lc_almost_cosymplectic", 3)
    # 3-dimensional fibres: the trace component delta(phiform)(xi) vanishes
    fctx = _fibre_ctx(sp)
    val = float(fctx.delta_phi.val @ fctx.xi.val)
    return [residual(val, 0.0)]


def _ev_s4b_fibre(sp, vecs, env):
    if sp.spec.r >= 2:
        return _fibre_class_residual(sp, vecs, env, "lc_cosymplectic", 3)
    return _fibre_class_residual(sp, vecs, env, "C12", 2)


def _ev_s4c_fibre(sp, vecs, env):
    if sp.spec.r >= 2:
        return _fibre_class_residual(sp, vecs, env, "C4_C6_C7", 3)
    return _fibre_class_residual(sp, vecs, env, "alpha_sasakian", 2)


_LC = "lc_almost_quasi_sasakian"

REGISTRY: dict[str, IdentityRecord] = {}


def _reg(rec: IdentityRecord) -> None:
    REGISTRY[rec.id] = rec


_reg(IdentityRecord("P2.1.deta", "", _ev_deta, "delta eta = 0", total_class=_LC))
_reg(IdentityRecord("P2.1.AXU", "hv", _ev_axu,
                    "A_X U = eta(U) A_X xi - omega(phi U) phi X", total_class=_LC))
_reg(IdentityRecord("P2.1.AXY", "hh", _ev_axy,
                    "A_X Y = eta(A_X Y) xi + phiform(X,Y) v(phi B)", total_class=_LC))
_reg(IdentityRecord("P2.1.Aphi", "hvh", _ev_aphi,
                    "A_{phi X} U - phi(A_X U) = eta(U)(A_{phi X} xi - phi(A_X xi)); "
                    "A_X Y - A_{phi X} phi Y = eta(A_X Y - A_{phi X} phi Y) xi",
                    total_class=_LC))
_reg(IdentityRecord("P2.1.eq10", "hhv", _ev_eq10,
                    "g(A_X Y, phi U) = omega(U) g(X, phi Y)", total_class=_LC))
_reg(IdentityRecord("P2.2.lee", "v", _ev_fibre_lee,
                    "fibre Lee form = restriction of the Lee form",
                    total_class=_LC, min_r=1))
_reg(IdentityRecord("P2.3.beta", "h", _ev_beta_push,
                    "beta(push(X)) = omega(X)", total_class=_LC, min_n=2))
_reg(IdentityRecord("P2.4.h1", "hv", _ev_h1,
                    "h((nabla_X phi) U) = omega(U) phi X - omega(phi U) X - eta(U) phi(A_X xi)",
                    total_class=_LC))
_reg(IdentityRecord("P2.4.h2", "hv", _ev_h2,
                    "h((nabla_U phi) X) = eta(U)(A_{phi X} xi - phi(A_X xi))",
                    total_class=_LC))
_reg(IdentityRecord("P2.5.v1", "hv", _ev_v1,
                    "v((nabla_X phi) U) = -eta(U) phi(T_xi X) - g(T_xi X, phi U) xi",
                    total_class=_LC))
_reg(IdentityRecord("P2.5.v2", "hv", _ev_v2,
                    "v((nabla_U phi) X) = eta(U)(T_xi phi X - phi(T_xi X)) + omega(X) phi U"
                    " + omega(phi X) phi^2 U + (1/2) N_phi(X, phi U)",
                    total_class=_LC))
_reg(IdentityRecord("P2.45.sum", "hv", _ev_sum_consistency,
                    "stated h-part + stated v-part = (nabla_X phi) U", total_class=_LC))
_reg(IdentityRecord("P2.5.T", "vv", _ev_t20,
                    "T_U phi V - T_{phi U} V = eta(U) T_{phi V} xi - eta(V) T_{phi U} xi"
                    " + 2 phiform(U,V) h(B)", total_class=_LC))
_reg(IdentityRecord("C2.1.N", "", _ev_mean,
                    "N = 2r h(B) + T_xi xi", total_class=_LC))

_reg(IdentityRecord("T3.1.A", "hh", _ev_a_zero, "A = 0 (horizontal distribution integrable)",
                    total_class="almost_cosymplectic"))
_reg(IdentityRecord("T3.1.Txi", "a", _ev_txi_zero, "T_xi = 0",
                    total_class="almost_cosymplectic"))
_reg(IdentityRecord("T3.1.minimal", "", _ev_minimal, "fibres are minimal (N = 0)",
                    total_class="almost_cosymplectic"))
_reg(IdentityRecord("T3.1.nabla1", "hv", _ev_nabla_xu_zero, "(nabla_X phi) U = 0",
                    total_class="almost_cosymplectic"))
_reg(IdentityRecord("T3.1.nabla2", "hv", _ev_nabla_ux_nij,
                    "(nabla_U phi) X = (1/2) N_phi(X, phi U)",
                    total_class="almost_cosymplectic"))
_reg(IdentityRecord("T3.1.base", "bbb", _ev_base_dOmega, "base is almost Kaehler (dOmega = 0)",
                    total_class="almost_cosymplectic"))
_reg(IdentityRecord("T3.1.fibre", "vvv", _ev_t31_fibre,
                    "fibres inherit an almost cosymplectic structure",
                    total_class="almost_cosymplectic", min_r=1))

_reg(IdentityRecord("T3.2.base", "bbb", _ev_base_kahler, "base is Kaehler (nabla Omega = 0)",
                    total_class="quasi_sasakian"))
_reg(IdentityRecord("T3.2.minimal", "", _ev_minimal, "fibres are minimal (N = 0)",
                    total_class="quasi_sasakian"))
_reg(IdentityRecord("T3.2.A", "hv", _ev_t32_a,
                    "A_{phi X} U = phi(A_X U) = eta(U) A_{phi X} xi; "
                    "A_X phi U - phi(A_X U) = -eta(U) A_{phi X} xi",
                    total_class="quasi_sasakian"))
_reg(IdentityRecord("T3.2.T", "vv", _ev_t32_t,
                    "T_xi o phi = phi o T_xi; T_U phi V - phi(T_U V) = -eta(V) T_xi(phi U)",
                    total_class="quasi_sasakian"))
_reg(IdentityRecord("T3.2.nabla1", "hv", _ev_t32_nabla_u,
                    "(nabla_U phi) X = g(T_xi phi U, X) xi", total_class="quasi_sasakian"))
_reg(IdentityRecord("T3.2.nabla2", "hv", _ev_t32_nabla_x,
                    "v((nabla_X phi) U) = -eta(U) phi(T_xi X) + g(phi(T_xi U), X) xi",
                    total_class="quasi_sasakian"))
_reg(IdentityRecord("T3.2.fibre", "vvv", _ev_t32_fibre,
                    "fibres inherit a quasi-Sasakian structure",
                    total_class="quasi_sasakian", min_r=1))

_reg(IdentityRecord("T3.6.base", "bbb", _ev_base_kahler, "base is Kaehler (nabla Omega = 0)",
                    total_class="alpha_sasakian"))
_reg(IdentityRecord("T3.6.A", "hh", _ev_t36_a, "A_X Y = -alpha phiform(X,Y) xi",
                    total_class="alpha_sasakian"))
_reg(IdentityRecord("T3.6.T", "vv", _ev_t36_t, "T_U o phi = phi o T_U on verticals",
                    total_class="alpha_sasakian"))
_reg(IdentityRecord("T3.6.fibre", "vv", _ev_t36_fibre,
                    "fibres inherit a structure with the same constant",
                    total_class="alpha_sasakian", min_r=1))

_reg(IdentityRecord("T3.3.base", "bbb", _ev_base_kahler, "base is Kaehler (nabla Omega = 0)",
                    total_class="C12"))
_reg(IdentityRecord("T3.3.A", "hh", _ev_a_zero, "A = 0 (horizontal totally geodesic)",
                    total_class="C12"))
_reg(IdentityRecord("T3.3.T60", "vv", _ev_t33_t60,
                    "T_U phi V = phi(T_U V) - eta(U) eta(V) phi(T_xi xi)", total_class="C12"))
_reg(IdentityRecord("T3.3.T61", "vv", _ev_t33_t61,
                    "T_U V + T_{phi U} phi V = eta(U) eta(V) T_xi xi", total_class="C12"))
_reg(IdentityRecord("T3.3.n62", "vh", _ev_t33_n62,
                    "(nabla_U phi) X = -eta(U) g(T_xi xi, phi X) xi", total_class="C12"))
_reg(IdentityRecord("T3.3.n63", "hv", _ev_nabla_xu_zero, "(nabla_X phi) U = 0",
                    total_class="C12"))
_reg(IdentityRecord("T3.3.fibre", "vv", _ev_t33_fibre,
                    "fibres inherit the same narrow class", total_class="C12", min_r=1))

_reg(IdentityRecord("S4A.A", "hh", _ev_s4a_a, "A_X Y = phiform(X,Y) v(phi B)",
                    total_class="lc_almost_cosymplectic"))
_reg(IdentityRecord("S4A.base", "bbb", _ev_base_w2w4,
                    "base: dOmega = -2 beta ^ Omega with beta closed",
                    total_class="lc_almost_cosymplectic", min_n=2))
_reg(IdentityRecord("S4A.mean", "", _ev_s4a_mean, "h(B) = T_xi xi (mean curvature direction)",
                    total_class="lc_almost_cosymplectic"))
_reg(IdentityRecord("S4A.fibre", "vvv", _ev_s4a_fibre,
                    "fibre class transfer for the conformal almost cosymplectic case",
                    total_class="lc_almost_cosymplectic", min_r=1))

_reg(IdentityRecord("S4B.T", "vh", _ev_s4b_t,
                    "T_xi U = eta(U) T_xi xi; T_xi X = -omega(X) xi",
                    total_class="lc_cosymplectic"))
_reg(IdentityRecord("S4B.base", "bbb", _ev_base_w4,
                    "base: dOmega = -2 beta ^ Omega, beta closed, N_J = 0",
                    total_class="lc_cosymplectic", min_n=2))
_reg(IdentityRecord("S4B.fibre", "vvv", _ev_s4b_fibre,
                    "fibre class transfer for the conformal cosymplectic case",
                    total_class="lc_cosymplectic", min_r=1))

_reg(IdentityRecord("S4C.A", "hv", _ev_s4c_a, "A_{phi X} U = phi(A_X U)",
                    total_class="C4_C6_C7"))
_reg(IdentityRecord("S4C.A2", "hh", _ev_s4c_a2, "A_X Y = A_{phi X} phi Y",
                    total_class="C4_C6_C7"))
_reg(IdentityRecord("S4C.T", "a", _ev_s4c_t, "T_xi o phi = phi o T_xi",
                    total_class="C4_C6_C7"))
_reg(IdentityRecord("S4C.base", "bbb", _ev_base_w4,
                    "base: dOmega = -2 beta ^ Omega, beta closed, N_J = 0",
                    total_class="C4_C6_C7"))
_reg(IdentityRecord("S4C.fibre", "vvv", _ev_s4c_fibre,
                    "fibre class transfer for the normal conformal case",
                    total_class="C4_C6_C7", min_r=1))

_reg(IdentityRecord("umbilic", "vv", _ev_umbilic,
                    "T_U V = (1/(2r+1)) g(U,V) N (totally umbilical fibres)", min_r=1))
_reg(IdentityRecord("superminimal", "va", _ev_superminimal,
                    "(nabla_U phi) = 0 for vertical U (superminimal fibres)", min_r=1))


def identity_ids() -> tuple[str, ...]:
    return tuple(REGISTRY)


def expand_identity_filter(selection) -> list[str]:
    """Expand ids and 'prefix.*' globs; 'all' selects everything."""
    if selection in (None, "all", ["all"]):
        return list(REGISTRY)
    if isinstance(selection, str):
        selection = [s.strip() for s in selection.split(",") if s.strip()]
    out: list[str] = []
    for item in selection:
        if item.endswith("*"):
            prefix = item.rstrip("*")
            matches = [k for k in REGISTRY if k.startswith(prefix)]
            if not matches:
                raise UnknownIdentityError(item, identity_ids())
            out.extend(m for m in matches if m not in out)
        else:
            if item not in REGISTRY:
                raise UnknownIdentityError(item, identity_ids())
            if item not in out:
                out.append(item)
    return out


class _PrecondCache:
    def __init__(self, spec: SubmersionSpec, sampling: Sampling):
        self.spec = spec
        self.sampling = sampling
        self.reports = {}

    def class_report(self, class_id: str):
        rep = self.reports.get(class_id)
        if rep is None:
            rep = classify(self.spec.total, class_id, self.sampling)
            self.reports[class_id] = rep
        return rep


def _draw_vectors(sp: SubmersionPointData, slots: str, rng) -> tuple:
    vecs = []
    for s in slots:
        if s == "h":
            vecs.append(sp.random_horizontal(rng))
        elif s == "v":
            vecs.append(sp.random_vertical(rng))
        elif s == "b":
            vecs.append(
                random_unit_vectors(rng, sp.base_ctx.geo.gval, 1)[0]
            )
        else:
            vecs.append(random_unit_vectors(rng, sp.total_ctx.geo.gval, 1)[0])
    return tuple(vecs)


def verify_identity(
    spec: SubmersionSpec,
    identity_id: str,
    sampling: Sampling = Sampling(),
    _cache: Optional[_PrecondCache] = None,
) -> VerificationReport:
    """Evaluate one registered identity over the sampling budget."""
    if identity_id not in REGISTRY:
        raise UnknownIdentityError(identity_id, identity_ids())
    rec = REGISTRY[identity_id]
    cache = _cache or _PrecondCache(spec, sampling)
    base_kw = dict(
        tolerance=sampling.tol,
        points=sampling.points,
        vectors=sampling.vectors,
        seed=sampling.seed,
    )
    if rec.min_r and spec.r < rec.min_r:
        return VerificationReport(
            identity=identity_id, ref=rec.ref, verdict="not_applicable",
            max_residual=float("nan"),
            reason=f"needs fibre rank r >= {rec.min_r} (this submersion has r = {spec.r})",
            **base_kw,
        )
    if rec.min_n and spec.n < rec.min_n:
        return VerificationReport(
            identity=identity_id, ref=rec.ref, verdict="not_applicable",
            max_residual=float("nan"),
            reason=f"needs base dimension >= {2 * rec.min_n} (this base has dim {2 * spec.n})",
            **base_kw,
        )
    env: dict = {}
    if rec.total_class is not None:
        rep = cache.class_report(rec.total_class)
        if rep.verdict != "holds":
            return VerificationReport(
                identity=identity_id, ref=rec.ref, verdict="not_applicable",
                max_residual=float("nan"),
                reason=f"total space does not classify {rec.total_class} "
                f"(verdict {rep.verdict}, residual {rep.max_residual:.3e})",
                **base_kw,
            )
        env.update(rep.extra)
    pts = sample_points(spec.total.chart, sampling.points, sampling.seed)
    rng = np.random.default_rng(sampling.seed ^ 0x1DE47)
    worst = (-1.0, 0, pts[0].point, ())
    for i, ps in enumerate(pts):
        sp = spec.at(ps)
        ntuples = sampling.vectors if rec.slots else 1
        for _ in range(ntuples):
            vecs = _draw_vectors(sp, rec.slots, rng)
            for res in rec.evaluator(sp, vecs, env):
                if res > worst[0]:
                    worst = (res, i, ps.point, vecs)
    max_res, widx, wpoint, wvecs = worst
    return VerificationReport(
        identity=identity_id,
        ref=rec.ref,
        verdict=verdict_for(max_res, sampling.tol),
        max_residual=max_res,
        witness_point_index=widx,
        witness_point=wpoint,
        witness_vectors=tuple(tuple(float(x) for x in v) for v in wvecs),
        extra={k: float(v) for k, v in env.items()},
        **base_kw,
    )


def verify_identities(
    spec: SubmersionSpec, selection=None, sampling: Sampling = Sampling()
) -> list[VerificationReport]:
    ids = expand_identity_filter(selection)
    cache = _PrecondCache(spec, sampling)
    return [verify_identity(spec, i, sampling, _cache=cache) for i in ids]
