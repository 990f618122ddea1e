"""Levi-Civita machinery and differential operators on a chart.

Normalization conventions (fixed package-wide):

  d of a 1-form:   (da)(X,Y)    = (1/2) (X a(Y) - Y a(X) - a([X,Y]))
  d of a 2-form:   (db)(X,Y,Z)  = (1/3) cyclic sum of X b(Y,Z) - b([X,Y],Z)
  wedge 1^1:       (a^b)(X,Y)   = (1/2) (a(X) b(Y) - a(Y) b(X))
  wedge 1^2:       (a^b)(X,Y,Z) = (1/3) (a(X)b(Y,Z) + a(Y)b(Z,X) + a(Z)b(X,Y))
  codifferential:  (delta b)(..) = - sum_i (nabla_{e_i} b)(e_i, ..) over a
                   g-orthonormal frame.

All derived quantities stay jet-valued so they can be differentiated once
more; exterior derivatives of derived forms therefore need no nested finite
differencing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import SingularMatrixError
from .jets import JetArray, jet_solve_linear, jt_einsum, jt_map
from .manifold import (
    ChartManifold,
    CovectorField,
    EndoField,
    PointSample,
    TwoFormField,
    VectorField,
    eval_field,
    gram_schmidt_extend,
    metric_jets,
)


@dataclass
class ConnectionAtPoint:
    """Christoffel symbols as jets; gamma[k, i, j], symmetric in (i, j)."""

    gamma: JetArray
    point: tuple


class PointGeometry:
    """Cached metric data of one chart at one point."""

    def __init__(self, chart: ChartManifold, point: tuple):
        self.chart = chart
        self.point = tuple(float(x) for x in point)

    @cached_property
    def g(self) -> JetArray:
        return metric_jets(self.chart, self.point)

    @cached_property
    def gval(self) -> np.ndarray:
        return self.g.val

    @cached_property
    def ginv(self) -> JetArray:
        d = self.chart.dim
        try:
            return jet_solve_linear(self.g, JetArray.constant(np.eye(d), d))
        except SingularMatrixError as exc:
            raise SingularMatrixError(f"metric singular at {self.point}") from exc

    @cached_property
    def gamma(self) -> JetArray:
        """gamma[k,i,j] = (1/2) g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})."""
        dg = self.g.partial_all()  # dg[a,b,z] = d_z g_ab
        m = jt_map("jlz->zjl", dg) + jt_map("ilz->izl", dg) - jt_map("ijz->ijz", dg)
        # m[i,j,l] = d_i g_jl + d_j g_il - d_l g_ij
        return 0.5 * jt_einsum("kl,ijl->kij", self.ginv.truncate(1), m)

    @cached_property
    def frame(self) -> JetArray:
        d = self.chart.dim
        cands = [JetArray.constant(np.eye(d)[i], d) for i in range(d)]
        return gram_schmidt_extend(cands, self.g, d)

    def norm(self, vec) -> float:
        vec = np.asarray(vec, dtype=float)
        return float(np.sqrt(max(vec @ self.gval @ vec, 0.0)))


def geometry(chart: ChartManifold, p) -> PointGeometry:
    point = tuple(p.point if isinstance(p, PointSample) else p)
    geo = chart._geometry_cache.get(point)
    if geo is None:
        geo = PointGeometry(chart, point)
        chart._geometry_cache[point] = geo
    return geo


def christoffel(chart: ChartManifold, p) -> ConnectionAtPoint:
    geo = geometry(chart, p)
    return ConnectionAtPoint(gamma=geo.gamma, point=geo.point)


_LETTERS = "abcefgh"


def nabla_tensor(comps: JetArray, valence: str, geo: PointGeometry) -> JetArray:
    """Covariant derivative of a tensor with valence string ('u'/'d' per
    axis).  Output axis 0 is the derivative slot: out[z, ...] = (nabla_z T)."""
    if len(valence) != comps.val.ndim:
        raise ValueError("valence length must match tensor rank")
    letters = _LETTERS[: len(valence)]
    dT = comps.partial_all()
    out = jt_map(f"{letters}z->z{letters}", dT)
    gamma = geo.gamma.truncate(out.order)
    tl = comps.truncate(out.order)
    for pos, kind in enumerate(valence):
        rep = letters[pos]
        src = letters.replace(rep, "l")
        if kind == "u":
            out = out + jt_einsum(f"{rep}zl,{src}->z{letters}", gamma, tl)
        else:
            out = out - jt_einsum(f"lz{rep},{src}->z{letters}", gamma, tl)
    return out


_VALENCE_BY_TYPE = {
    VectorField: "u",
    CovectorField: "d",
    EndoField: "ud",
    TwoFormField: "dd",
}


def field_valence(field) -> str:
    if isinstance(field, ChartManifold):
        return "dd"
    return _VALENCE_BY_TYPE[type(field)]


def covariant_derivative(field, direction, p) -> JetArray:
    """(nabla_X T) at p for a tangent value X, in the field's own valence."""
    if isinstance(field, ChartManifold):
        chart = field
    else:
        chart = field.chart
    valence = field_valence(field)
    geo = geometry(chart, p)
    comps = eval_field(field, p, order=2)
    nt = nabla_tensor(comps, valence, geo)
    letters = _LETTERS[: len(valence)]
    xj = JetArray.constant(np.asarray(direction, dtype=float), chart.dim, order=nt.order)
    return jt_einsum(f"z{letters},z->{letters}", nt, xj)


def exterior_derivative_comps(form: JetArray) -> JetArray:
    """d of a 1- or 2-form from jet components; the order drops by one."""
    dA = form.partial_all()
    if form.val.ndim == 1:
        # dA[a, z] = d_z alpha_a ; (da)_{ij} = 1/2 (d_i a_j - d_j a_i)
        t = jt_map("az->za", dA)
        return 0.5 * (t - jt_map("az->az", dA))
    if form.val.ndim == 2:
        # dA[a, b, z] = d_z b_{ab}
        # (db)_{ijk} = 1/3 (d_i b_{jk} + d_j b_{ki} + d_k b_{ij})
        t1 = jt_map("abz->zab", dA)  # [i,j,k] = d_i b_{jk}
        t2 = jt_map("abz->bza", dA)  # [i,j,k] = d_j b_{ki}
        t3 = jt_map("abz->abz", dA)  # [i,j,k] = d_k b_{ij}
        return (1.0 / 3.0) * (t1 + t2 + t3)
    raise ValueError("exterior derivative implemented for 1- and 2-forms only")


def exterior_derivative(form, p) -> JetArray:
    """d of a covector field or 2-form field (or raw jet components)."""
    if isinstance(form, JetArray):
        return exterior_derivative_comps(form)
    comps = eval_field(form, p, order=2)
    return exterior_derivative_comps(comps)


def wedge_11(a: JetArray, b: JetArray) -> JetArray:
    outer = jt_einsum("i,j->ij", a, b)
    return 0.5 * (outer - jt_map("ij->ji", outer))


def wedge_12(a: JetArray, b: JetArray) -> JetArray:
    """1-form wedge 2-form with the 1/3 normalization."""
    t1 = jt_einsum("i,jk->ijk", a, b)  # a(X) b(Y,Z)
    t2 = jt_map("jki->ijk", t1)  # a(Y) b(Z,X)
    t3 = jt_map("kij->ijk", t1)  # a(Z) b(X,Y)
    return (1.0 / 3.0) * (t1 + t2 + t3)


def wedge_11_values(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    outer = np.outer(a, b)
    return 0.5 * (outer - outer.T)


def wedge_12_values(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    t1 = np.einsum("i,jk->ijk", a, b)
    return (t1 + np.transpose(t1, (1, 2, 0)) + np.transpose(t1, (2, 0, 1))) / 3.0


def codifferential_comps(form: JetArray, frame: JetArray, valence: str, geo: PointGeometry) -> JetArray:
    """delta of a 1-form (scalar) or 2-form (covector) by frame sums."""
    nt = nabla_tensor(form, valence, geo)
    fr = frame.truncate(nt.order)
    if form.val.ndim == 1:
        # delta a = - sum_i (nabla_{e_i} a)(e_i)
        s = jt_einsum("iz,za->ia", fr, nt)
        return -jt_einsum("ia,ia->", s, fr)
    # (delta b)(X) = - sum_i (nabla_{e_i} b)(e_i, X)
    s = jt_einsum("iz,zab->iab", fr, nt)
    return -jt_einsum("iab,ia->b", s, fr)


def codifferential(form, p) -> JetArray:
    """delta of a covector field (scalar value) or 2-form field (covector)."""
    chart = form.chart
    geo = geometry(chart, p)
    comps = eval_field(form, p, order=2)
    valence = field_valence(form)
    return codifferential_comps(comps, geo.frame, valence, geo)


def nijenhuis_tensor(phi_jets: JetArray) -> JetArray:
    """N[k,i,j] for the endomorphism given by jets; order drops by one.

    N(X,Y) = phi^2[X,Y] + [phiX, phiY] - phi[X, phiY] - phi[phiX, Y] reduces
    in coordinates to
      N^k_ij = phi^l_i d_l phi^k_j - phi^l_j d_l phi^k_i
             - phi^k_l d_i phi^l_j + phi^k_l d_j phi^l_i.
    """
    dphi = phi_jets.partial_all()  # dphi[k, j, z] = d_z phi^k_j
    phil = phi_jets.truncate(dphi.order)
    t1 = jt_einsum("li,kjl->kij", phil, dphi)
    t2 = jt_map("kij->kji", t1)
    t3 = jt_einsum("kl,ljz->kzj", phil, dphi)  # phi^k_l d_z phi^l_j -> [k,i,j]
    t4 = jt_map("kij->kji", t3)
    return t1 - t2 - t3 + t4


def nijenhuis(phi: EndoField, x: VectorField, y: VectorField, p) -> np.ndarray:
    """N_phi(X, Y) at p; tensorial, so field extensions do not matter."""
    phi_jets = eval_field(phi, p, order=2)
    nt = nijenhuis_tensor(phi_jets)
    xv = eval_field(x, p, order=0)
    yv = eval_field(y, p, order=0)
    return np.einsum("kij,i,j->k", nt.val, xv, yv)
