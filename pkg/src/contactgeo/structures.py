"""Almost contact metric and almost Hermitian structures on a chart.

Each structure caches a per-point bundle of jet-valued derived quantities
(fundamental form, covariant derivatives, codifferentials, Lee form, Lee
vector field, exterior derivatives) so classification and identity
verification reuse one computation per sample point.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import LeeFormUndefinedError, StructureInvariantError
from .jets import JetArray, jt_einsum
from .manifold import (
    ChartManifold,
    CovectorField,
    EndoField,
    PointSample,
    VectorField,
    eval_exprs,
    sample_points,
)
from .riemann import (
    PointGeometry,
    codifferential_comps,
    exterior_derivative_comps,
    geometry,
    nabla_tensor,
    nijenhuis_tensor,
)


def _as_point(p) -> tuple:
    return tuple(p.point if isinstance(p, PointSample) else p)


class AcmStructure:
    """(phi, xi, eta, g) on an odd-dimensional chart."""

    kind = "acm"

    def __init__(self, chart: ChartManifold, phi: EndoField, xi: VectorField, eta: CovectorField):
        if chart.dim % 2 != 1:
            raise ValueError("almost contact metric structures need odd dimension")
        self.chart = chart
        self.phi = phi
        self.xi = xi
        self.eta = eta
        self._points = {}

    @property
    def m(self) -> int:
        return (self.chart.dim - 1) // 2

    def at(self, p) -> "AcmPointData":
        point = _as_point(p)
        data = self._points.get(point)
        if data is None:
            data = AcmPointData(self, point)
            self._points[point] = data
        return data

    def validate(self, points=None, n_points: int = 32, seed: int = 42, tol: float = 1e-9):
        """Check the defining identities at sample points; returns violations."""
        if points is None:
            points = sample_points(self.chart, n_points, seed)
        rng = np.random.default_rng(seed + 1)
        d = self.chart.dim
        problems = list(self.chart.validate_metric(points))
        for ps in points:
            ctx = self.at(ps)
            phi, xi, eta, g = ctx.phi.val, ctx.xi.val, ctx.eta.val, ctx.geo.gval
            phi2 = phi @ phi
            target = -np.eye(d) + np.outer(xi, eta)
            checks = {
                "phi^2 = -I + eta (x) xi": np.max(np.abs(phi2 - target)),
                "eta(xi) = 1": abs(eta @ xi - 1.0),
                "phi xi = 0": np.max(np.abs(phi @ xi)),
                "eta o phi = 0": np.max(np.abs(eta @ phi)),
            }
            x, y = rng.standard_normal(d), rng.standard_normal(d)
            lhs = (phi @ x) @ g @ (phi @ y)
            rhs = x @ g @ y - (eta @ x) * (eta @ y)
            checks["g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)"] = abs(lhs - rhs) / (
                1.0 + abs(lhs) + abs(rhs)
            )
            for name, res in checks.items():
                if res > tol:
                    problems.append(f"{name}: residual {res:.3e} at {ps.point}")
        return problems

    def require_valid(self, **kw) -> None:
        problems = self.validate(**kw)
        if problems:
            raise StructureInvariantError(
                "structure invariants violated", violations=problems
            )


class AhStructure:
    """(J, g) on an even-dimensional chart."""

    kind = "ah"

    def __init__(self, chart: ChartManifold, j: EndoField):
        if chart.dim % 2 != 0:
            raise ValueError("almost Hermitian structures need even dimension")
        self.chart = chart
        self.j = j
        self._points = {}

    @property
    def n(self) -> int:
        return self.chart.dim // 2

    def at(self, p) -> "AhPointData":
        point = _as_point(p)
        data = self._points.get(point)
        if data is None:
            data = AhPointData(self, point)
            self._points[point] = data
        return data

    def validate(self, points=None, n_points: int = 32, seed: int = 42, tol: float = 1e-9):
        if points is None:
            points = sample_points(self.chart, n_points, seed)
        rng = np.random.default_rng(seed + 1)
        d = self.chart.dim
        problems = list(self.chart.validate_metric(points))
        for ps in points:
            ctx = self.at(ps)
            jm, g = ctx.j.val, ctx.geo.gval
            checks = {"J^2 = -I": np.max(np.abs(jm @ jm + np.eye(d)))}
            x, y = rng.standard_normal(d), rng.standard_normal(d)
            lhs = (jm @ x) @ g @ (jm @ y)
            rhs = x @ g @ y
            checks["g(JX, JY) = g(X,Y)"] = abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))
            for name, res in checks.items():
                if res > tol:
                    problems.append(f"{name}: residual {res:.3e} at {ps.point}")
        return problems

    def require_valid(self, **kw) -> None:
        problems = self.validate(**kw)
        if problems:
            raise StructureInvariantError(
                "structure invariants violated", violations=problems
            )


class AcmPointData:
    """Jet-valued derived quantities of an ACM structure at one point."""

    def __init__(self, structure: AcmStructure, point: tuple):
        self.structure = structure
        self.point = point
        self.geo: PointGeometry = geometry(structure.chart, point)

    @cached_property
    def phi(self) -> JetArray:
        return eval_exprs(self.structure.chart, self.structure.phi.components, self.point)

    @cached_property
    def xi(self) -> JetArray:
        return eval_exprs(self.structure.chart, self.structure.xi.components, self.point)

    @cached_property
    def eta(self) -> JetArray:
        return eval_exprs(self.structure.chart, self.structure.eta.components, self.point)

    @cached_property
    def phiform(self) -> JetArray:
        # phiform(X, Y) = g(X, phi Y)
        return jt_einsum("il,lj->ij", self.geo.g, self.phi)

    @cached_property
    def nabla_phi(self) -> JetArray:
        """NP[z, k, j] = ((nabla_z phi)^k_j), order 1."""
        return nabla_tensor(self.phi, "ud", self.geo)

    @cached_property
    def nabla_phiform(self) -> JetArray:
        """NF[z, a, b] = (nabla_z phiform)(a, b) = g_{al} NP[z, l, b]."""
        return jt_einsum("al,zlb->zab", self.geo.g.truncate(1), self.nabla_phi)

    @cached_property
    def nabla_eta(self) -> JetArray:
        return nabla_tensor(self.eta, "d", self.geo)

    @cached_property
    def nabla_xi(self) -> JetArray:
        return nabla_tensor(self.xi, "u", self.geo)

    @cached_property
    def dphi(self) -> JetArray:
        return exterior_derivative_comps(self.phiform)

    @cached_property
    def deta(self) -> JetArray:
        return exterior_derivative_comps(self.eta)

    @cached_property
    def delta_eta(self) -> JetArray:
        return codifferential_comps(self.eta, self.geo.frame, "d", self.geo)

    @cached_property
    def delta_phi(self) -> JetArray:
        return codifferential_comps(self.phiform, self.geo.frame, "dd", self.geo)

    @cached_property
    def nabla_xi_eta(self) -> JetArray:
        """(nabla_xi eta) as a jet covector."""
        xi = self.xi.truncate(self.nabla_eta.order)
        return jt_einsum("z,za->a", xi, self.nabla_eta)

    @cached_property
    def lee(self) -> JetArray:
        """The Lee form as a jet covector (so the exterior derivative exists).

        dim >= 5:  -(1/(2(m-1))) (delta(phiform) o phi + nabla_xi eta)
                   + (delta eta / 2m) eta
        dim == 3:  nabla_xi eta + (delta eta / 2) eta
        """
        m = self.structure.m
        order = 1
        eta = self.eta.truncate(order)
        if m >= 2:
            dphi_o_phi = jt_einsum("k,kj->j", self.delta_phi, self.phi.truncate(order))
            core = dphi_o_phi + self.nabla_xi_eta
            return (-1.0 / (2.0 * (m - 1))) * core + (1.0 / (2.0 * m)) * (
                self.delta_eta * eta
            )
        return self.nabla_xi_eta + 0.5 * (self.delta_eta * eta)

    @cached_property
    def lee_vec(self) -> JetArray:
        """Lee vector field B = (lee form) raised with the inverse metric."""
        return jt_einsum("ij,j->i", self.geo.ginv.truncate(1), self.lee)

    @cached_property
    def dlee(self) -> JetArray:
        return exterior_derivative_comps(self.lee)

    @cached_property
    def nijenhuis(self) -> JetArray:
        return nijenhuis_tensor(self.phi)

    @cached_property
    def nabla_xi_xi(self) -> JetArray:
        xi = self.xi.truncate(self.nabla_xi.order)
        return jt_einsum("z,zk->k", xi, self.nabla_xi)

    def norm(self, vec) -> float:
        return self.geo.norm(vec)


class AhPointData:
    """Jet-valued derived quantities of an AH structure at one point."""

    def __init__(self, structure: AhStructure, point: tuple):
        self.structure = structure
        self.point = point
        self.geo: PointGeometry = geometry(structure.chart, point)

    @cached_property
    def j(self) -> JetArray:
        return eval_exprs(self.structure.chart, self.structure.j.components, self.point)

    @cached_property
    def omega(self) -> JetArray:
        # Omega(X, Y) = g(X, J Y)
        return jt_einsum("il,lj->ij", self.geo.g, self.j)

    @cached_property
    def nabla_j(self) -> JetArray:
        return nabla_tensor(self.j, "ud", self.geo)

    @cached_property
    def nabla_omega(self) -> JetArray:
        return jt_einsum("al,zlb->zab", self.geo.g.truncate(1), self.nabla_j)

    @cached_property
    def domega(self) -> JetArray:
        return exterior_derivative_comps(self.omega)

    @cached_property
    def delta_omega(self) -> JetArray:
        return codifferential_comps(self.omega, self.geo.frame, "dd", self.geo)

    @cached_property
    def lee(self) -> JetArray:
        """beta = -(1/(2(n-1))) delta(Omega) o J; undefined for n = 1."""
        n = self.structure.n
        if n < 2:
            raise LeeFormUndefinedError(
                "the Lee form needs dim >= 4; a 2-dimensional almost Hermitian "
                "manifold is automatically Kaehler"
            )
        comp = jt_einsum("k,kj->j", self.delta_omega, self.j.truncate(1))
        return (-1.0 / (2.0 * (n - 1))) * comp

    @cached_property
    def dlee(self) -> JetArray:
        return exterior_derivative_comps(self.lee)

    @cached_property
    def nijenhuis(self) -> JetArray:
        return nijenhuis_tensor(self.j)

    def norm(self, vec) -> float:
        return self.geo.norm(vec)


# ---- spec-level operations ----


def fundamental_form(structure, x, y, p) -> float:
    """g(X, phi Y) for ACM structures, g(X, J Y) for AH structures."""
    ctx = structure.at(p)
    form = ctx.phiform if structure.kind == "acm" else ctx.omega
    return float(np.asarray(x, float) @ form.val @ np.asarray(y, float))


def lee_form_acm(structure: AcmStructure, p, x) -> float:
    ctx = structure.at(p)
    return float(ctx.lee.val @ np.asarray(x, float))


def lee_form_ah(structure: AhStructure, p, x) -> float:
    ctx = structure.at(p)
    return float(ctx.lee.val @ np.asarray(x, float))
