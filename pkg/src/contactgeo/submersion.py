"""Contact-complex Riemannian submersions in adapted coordinates.

The projection must be the coordinate map forgetting the last 2r+1
coordinates.  This makes the vertical distribution exactly the span of the
trailing coordinate fields, so vertical frames and horizontal lifts are
smooth jet-differentiable fields, which the covariant-derivative tables
require.

O'Neill tensors (standard definitions):

    T_E F = h(nabla_{vE} vF) + v(nabla_{vE} hF)
    A_E F = v(nabla_{hE} hF) + h(nabla_{hE} vF)

A tangent value at p is extended to a field as a constant-coefficient
combination of the canonical frames (trailing coordinate fields, horizontal
lifts of leading coordinate fields); T and A are tensors so their values do
not depend on the extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import StructureInvariantError
from .expr import as_expr
from .jets import JetArray, jet_solve_linear, jt_einsum, jt_stack, gram_schmidt_extend
from .manifold import ChartManifold, CovectorField, EndoField, PointSample, VectorField, eval_exprs, sample_points
from .structures import AcmPointData, AcmStructure, AhStructure


def _as_point(p) -> tuple:
    return tuple(p.point if isinstance(p, PointSample) else p)


class SubmersionSpec:
    """Total ACM structure, base AH structure and an adapted projection."""

    def __init__(self, total: AcmStructure, base: AhStructure, projection, adapted: bool = True):
        self.total = total
        self.base = base
        self.projection = [as_expr(e) for e in projection]
        self.adapted = adapted
        nb = base.chart.dim
        if len(self.projection) != nb:
            raise ValueError("projection must have one component per base coordinate")
        if nb >= total.chart.dim:
            raise ValueError("base dimension must be smaller than total dimension")
        if adapted:
            for i, e in enumerate(self.projection):
                if str(e) != total.chart.coords[i]:
                    raise ValueError(
                        "adapted projection must forget the trailing coordinates "
                        f"(component {i} is '{e}', expected '{total.chart.coords[i]}')"
                    )
        self._points = {}
        self._fibres = {}

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        return self.total.m

    @property
    def r(self) -> int:
        return self.m - self.n

    @property
    def n_base(self) -> int:
        return 2 * self.n

    @property
    def n_vert(self) -> int:
        return self.total.chart.dim - self.n_base

    def base_point(self, p) -> tuple:
        return _as_point(p)[: self.n_base]

    def at(self, p) -> "SubmersionPointData":
        point = _as_point(p)
        data = self._points.get(point)
        if data is None:
            data = SubmersionPointData(self, point)
            self._points[point] = data
        return data

    def fibre(self, base_point) -> AcmStructure:
        key = tuple(float(x) for x in base_point)
        fs = self._fibres.get(key)
        if fs is None:
            fs = fibre_structure(self, key)
            self._fibres[key] = fs
        return fs

    def validate(self, points=None, n_points: int = 16, seed: int = 42, tol: float = 1e-9):
        """Rank, Riemannian-submersion and structure-intertwining checks."""
        if points is None:
            points = sample_points(self.total.chart, n_points, seed)
        problems = self.total.validate(points=points, tol=tol)
        base_pts = [PointSample(self.base_point(ps), ps.rng_seed) for ps in points]
        problems += self.base.validate(points=base_pts, tol=tol)
        rng = np.random.default_rng(seed + 2)
        nb = self.n_base
        for ps in points:
            sp = self.at(ps)
            dpi = sp.dprojection
            if np.linalg.matrix_rank(dpi, tol=1e-10) != nb:
                problems.append(f"projection differential rank-deficient at {ps.point}")
                continue
            if not self.adapted:
                problems.append(
                    "projection is not in adapted form; the vertical/horizontal "
                    "machinery needs the coordinate map forgetting the trailing "
                    "fibre coordinates"
                )
                break
            # isometry on horizontals
            for _ in range(3):
                u, w = rng.standard_normal(nb), rng.standard_normal(nb)
                hx = sp.lift_value(u)
                hy = sp.lift_value(w)
                lhs = float(hx @ sp.total_ctx.geo.gval @ hy)
                rhs = float(u @ sp.base_ctx.geo.gval @ w)
                if abs(lhs - rhs) / (1 + abs(lhs) + abs(rhs)) > tol:
                    problems.append(
                        f"horizontal isometry residual {abs(lhs - rhs):.3e} at {ps.point}"
                    )
            # J o dpi = dpi o phi
            phi = sp.total_ctx.phi.val
            jm = sp.base_ctx.j.val
            res = np.max(np.abs(jm @ dpi - dpi @ phi))
            if res > tol:
                problems.append(f"structure intertwining residual {res:.3e} at {ps.point}")
        return problems

    def require_valid(self, **kw) -> None:
        problems = self.validate(**kw)
        if problems:
            raise StructureInvariantError("submersion invariants violated", violations=problems)


@dataclass
class SplitAtPoint:
    """Orthonormal vertical/horizontal jet frames and the jet projectors."""

    vertical_frame: JetArray
    horizontal_frame: JetArray
    v: JetArray
    h: JetArray


class SubmersionPointData:
    """Frames, lifts, covariant-derivative tables and O'Neill tensors at a point."""

    def __init__(self, spec: SubmersionSpec, point: tuple):
        self.spec = spec
        self.point = point
        self.total_ctx: AcmPointData = spec.total.at(point)
        self.base_ctx = spec.base.at(spec.base_point(point))

    # ---- projection differential ----

    @cached_property
    def dprojection(self) -> np.ndarray:
        d = self.spec.total.chart.dim
        comps = np.empty(len(self.spec.projection), dtype=object)
        for i, e in enumerate(self.spec.projection):
            comps[i] = e
        jets = eval_exprs(self.spec.total.chart, comps, self.point, order=1)
        return jets.grad  # (2n, d)

    # ---- canonical frames ----

    @cached_property
    def lifts(self) -> JetArray:
        """Horizontal lifts of the base coordinate fields, as jet fields.

        lift_i = d_i + c_i^a d_a with g_vv c_i = -g_{v,i}; rows (2n, d)."""
        if not self.spec.adapted:
            raise ValueError(
                "horizontal lifts need adapted coordinates (projection must "
                "forget the trailing fibre coordinates)"
            )
        nb, nv = self.spec.n_base, self.spec.n_vert
        g = self.total_ctx.geo.g
        gvv = g[nb:, nb:]
        gvb = g[nb:, :nb]
        c = jet_solve_linear(gvv, -gvb)  # (nv, nb)
        d = nb + nv
        val = np.zeros((nb, d))
        val[:, :nb] = np.eye(nb)
        val[:, nb:] = c.val.T
        grad = np.zeros((nb, d, d))
        grad[:, nb:, :] = np.transpose(c.grad, (1, 0, 2))
        hess = np.zeros((nb, d, d, d))
        hess[:, nb:, :, :] = np.transpose(c.hess, (1, 0, 2, 3))
        return JetArray(val, grad, hess, c.order)

    @cached_property
    def vertical_coordinate_fields(self) -> JetArray:
        nb, nv = self.spec.n_base, self.spec.n_vert
        d = nb + nv
        return JetArray.constant(np.eye(d)[nb:], d)

    @cached_property
    def split(self) -> SplitAtPoint:
        g = self.total_ctx.geo.g
        d = self.spec.total.chart.dim
        nv = self.spec.n_vert
        # vertical frame: xi first for orthonormalization, then reported last
        xi = self.total_ctx.xi
        cands = [xi] + [self.vertical_coordinate_fields[a] for a in range(nv)]
        vf = gram_schmidt_extend(cands, g, nv)
        vertical = jt_stack([vf[i] for i in range(1, nv)] + [vf[0]], axis=0)
        horizontal = gram_schmidt_extend(
            [self.lifts[i] for i in range(self.spec.n_base)], g, self.spec.n_base
        )
        # h projector: columns of the lift matrix against the base-component
        # duals; v = I - h
        nb = self.spec.n_base
        sel = JetArray.constant(np.eye(d)[:nb], d)  # (nb, d) duals
        h = jt_einsum("ik,ij->kj", self.lifts, sel)
        ident = JetArray.constant(np.eye(d), d)
        v = ident - h
        return SplitAtPoint(vertical_frame=vertical, horizontal_frame=horizontal, v=v, h=h)

    # ---- value-level projections ----

    def lift_value(self, base_vec) -> np.ndarray:
        return np.asarray(base_vec, float) @ self.lifts.val

    def h_value(self, vec) -> np.ndarray:
        vec = np.asarray(vec, dtype=float)
        return vec[: self.spec.n_base] @ self.lifts.val

    def v_value(self, vec) -> np.ndarray:
        vec = np.asarray(vec, dtype=float)
        return vec - self.h_value(vec)

    def pushforward(self, vec) -> np.ndarray:
        return self.dprojection @ np.asarray(vec, dtype=float)

    # ---- covariant-derivative tables over the canonical frames ----

    def _nabla_field(self, direction_field: JetArray, target_field: JetArray) -> JetArray:
        """nabla of a jet vector field along a jet vector field (values as
        jets one order lower)."""
        dt = target_field.partial_all()  # dT[k, z]
        gamma = self.total_ctx.geo.gamma
        order = min(dt.order, gamma.order)
        dirf = direction_field.truncate(order)
        flat = jt_einsum("z,kz->k", dirf, dt.truncate(order))
        conn = jt_einsum("kzl,l->kz", gamma.truncate(order), target_field.truncate(order))
        return flat + jt_einsum("z,kz->k", dirf, conn)

    @cached_property
    def nabla_vv(self) -> np.ndarray:
        """nabla_{V_a} V_b over trailing coordinate fields: (nv, nv, d)."""
        nb, nv = self.spec.n_base, self.spec.n_vert
        gamma = self.total_ctx.geo.gamma.val
        return np.transpose(gamma[:, nb:, nb:], (1, 2, 0))

    @cached_property
    def nabla_vl(self) -> np.ndarray:
        """nabla_{V_a} lift_i: (nv, 2n, d)."""
        nb, nv = self.spec.n_base, self.spec.n_vert
        out = np.empty((nv, nb, nb + nv))
        for a in range(nv):
            va = self.vertical_coordinate_fields[a]
            for i in range(nb):
                out[a, i] = self._nabla_field(va, self.lifts[i]).val
        return out

    @cached_property
    def nabla_lv(self) -> np.ndarray:
        """nabla_{lift_i} V_a: (2n, nv, d)."""
        nb, nv = self.spec.n_base, self.spec.n_vert
        out = np.empty((nb, nv, nb + nv))
        for i in range(nb):
            li = self.lifts[i]
            for a in range(nv):
                out[i, a] = self._nabla_field(li, self.vertical_coordinate_fields[a]).val
        return out

    @cached_property
    def nabla_ll(self) -> np.ndarray:
        """nabla_{lift_i} lift_j: (2n, 2n, d)."""
        nb = self.spec.n_base
        out = np.empty((nb, nb, nb + self.spec.n_vert))
        for i in range(nb):
            li = self.lifts[i]
            for j in range(nb):
                out[i, j] = self._nabla_field(li, self.lifts[j]).val
        return out

    # ---- O'Neill tensors ----

    def oneill_t(self, e, f) -> np.ndarray:
        """T_E F = h(nabla_{vE} vF) + v(nabla_{vE} hF)."""
        nb = self.spec.n_base
        ve = self.v_value(e)[nb:]
        vf = self.v_value(f)[nb:]
        hf_b = np.asarray(f, dtype=float)[:nb]
        first = np.einsum("a,b,abk->k", ve, vf, self.nabla_vv)
        second = np.einsum("a,i,aik->k", ve, hf_b, self.nabla_vl)
        return self.h_value(first) + self.v_value(second)

    def oneill_a(self, e, f) -> np.ndarray:
        """A_E F = v(nabla_{hE} hF) + h(nabla_{hE} vF)."""
        nb = self.spec.n_base
        he_b = np.asarray(e, dtype=float)[:nb]
        hf_b = np.asarray(f, dtype=float)[:nb]
        vf = self.v_value(f)[nb:]
        first = np.einsum("i,j,ijk->k", he_b, hf_b, self.nabla_ll)
        second = np.einsum("i,a,iak->k", he_b, vf, self.nabla_lv)
        return self.v_value(first) + self.h_value(second)

    @cached_property
    def t_xi_xi(self) -> np.ndarray:
        xi = self.total_ctx.xi.val
        return self.oneill_t(xi, xi)

    @cached_property
    def vertical_on_frame(self) -> np.ndarray:
        return self.split.vertical_frame.val

    @cached_property
    def mean_curvature(self) -> np.ndarray:
        """N = sum_i T_{u_i} u_i over a vertical orthonormal frame."""
        frame = self.vertical_on_frame
        out = np.zeros(self.spec.total.chart.dim)
        for u in frame:
            out += self.oneill_t(u, u)
        return out

    # ---- Lee vector data ----

    @cached_property
    def lee_vec(self) -> np.ndarray:
        return self.total_ctx.lee_vec.val

    @cached_property
    def h_lee(self) -> np.ndarray:
        return self.h_value(self.lee_vec)

    @cached_property
    def v_phi_lee(self) -> np.ndarray:
        return self.v_value(self.total_ctx.phi.val @ self.lee_vec)

    # ---- helpers for identity evaluators ----

    def phi(self, v) -> np.ndarray:
        return self.total_ctx.phi.val @ np.asarray(v, dtype=float)

    def eta(self, v) -> float:
        return float(self.total_ctx.eta.val @ np.asarray(v, dtype=float))

    def form(self, x, y) -> float:
        return float(np.asarray(x, float) @ self.total_ctx.phiform.val @ np.asarray(y, float))

    def g(self, x, y) -> float:
        return float(np.asarray(x, float) @ self.total_ctx.geo.gval @ np.asarray(y, float))

    def omega(self, v) -> float:
        return float(self.total_ctx.lee.val @ np.asarray(v, dtype=float))

    def norm(self, v) -> float:
        return self.total_ctx.geo.norm(v)

    def random_horizontal(self, rng) -> np.ndarray:
        from .util import random_unit_vectors

        return random_unit_vectors(rng, self.total_ctx.geo.gval, 1, project=self.h_value)[0]

    def random_vertical(self, rng) -> np.ndarray:
        from .util import random_unit_vectors

        return random_unit_vectors(rng, self.total_ctx.geo.gval, 1, project=self.v_value)[0]


# ---- spec-level operations ----


def split(spec: SubmersionSpec, p) -> SplitAtPoint:
    return spec.at(p).split


def oneill_T(spec: SubmersionSpec, e, f, p) -> np.ndarray:
    return spec.at(p).oneill_t(e, f)


def oneill_A(spec: SubmersionSpec, e, f, p) -> np.ndarray:
    return spec.at(p).oneill_a(e, f)


def mean_curvature(spec: SubmersionSpec, p):
    """Returns (N, 2r h(B) + T_xi_xi) for cross-checking."""
    sp = spec.at(p)
    rhs = 2.0 * spec.r * sp.h_lee + sp.t_xi_xi
    return sp.mean_curvature, rhs


def fibre_structure(spec: SubmersionSpec, base_point) -> AcmStructure:
    """The induced ACM structure on the fibre over a base point.

    Freezes the leading coordinates at the base point and restricts phi, xi,
    eta and g to the trailing block.  Requires fibres of dimension >= 3 and
    phi mapping verticals to verticals.
    """
    if spec.r < 1:
        raise ValueError("1-dimensional fibres carry no almost contact metric structure")
    nb = spec.n_base
    total_chart = spec.total.chart
    fibre_coords = total_chart.coords[nb:]
    frozen = {name: float(v) for name, v in zip(total_chart.coords[:nb], base_point)}

    def restrict(e):
        return e.subs(frozen)

    metric = [
        [restrict(total_chart.metric[nb + i, nb + j]) for j in range(spec.n_vert)]
        for i in range(spec.n_vert)
    ]
    domain = {c: total_chart.domain[nb + i] for i, c in enumerate(fibre_coords)}
    chart = ChartManifold(fibre_coords, metric, domain=domain)
    phi_comps = [
        [restrict(spec.total.phi.components[nb + i, nb + j]) for j in range(spec.n_vert)]
        for i in range(spec.n_vert)
    ]
    # verticality of phi on verticals: the off-block must vanish on samples
    off = [
        restrict(spec.total.phi.components[i, nb + j])
        for i in range(nb)
        for j in range(spec.n_vert)
    ]
    for ps in sample_points(chart, 4, 7):
        vals = [abs(e.eval_value(dict(zip(fibre_coords, ps.point)))) for e in off]
        if vals and max(vals) > 1e-9:
            raise StructureInvariantError(
                "phi does not preserve the vertical distribution over this base point"
            )
    xi_comps = [restrict(spec.total.xi.components[nb + i]) for i in range(spec.n_vert)]
    eta_comps = [restrict(spec.total.eta.components[nb + i]) for i in range(spec.n_vert)]
    return AcmStructure(
        chart,
        EndoField(chart, phi_comps),
        VectorField(chart, xi_comps),
        CovectorField(chart, eta_comps),
    )
