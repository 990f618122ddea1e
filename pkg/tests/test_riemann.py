import numpy as np
import pytest

from contactgeo.catalog import catalog
from contactgeo.errors import SingularMatrixError
from contactgeo.manifold import (
    ChartManifold,
    CovectorField,
    PointSample,
    VectorField,
    eval_field,
    sample_points,
)
from contactgeo.riemann import (
    christoffel,
    codifferential,
    covariant_derivative,
    exterior_derivative,
    exterior_derivative_comps,
    geometry,
    nabla_tensor,
    nijenhuis,
)

FLAT3 = ChartManifold(["x", "y", "z"], [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])

EXP2 = ChartManifold(["x", "y"], [["1", "0"], ["0", "exp(2*x)"]])

WARPED = ChartManifold(
    ["u", "v", "a", "b", "c"],
    [
        ["1", "0", "0", "0", "0"],
        ["0", "1", "0", "0", "0"],
        ["0", "0", "exp(2*u)", "0", "0"],
        ["0", "0", "0", "exp(2*u)", "0"],
        ["0", "0", "0", "0", "exp(2*u)"],
    ],
)


class TestChristoffel:
    def test_flat_metric_vanishes(self):
        conn = christoffel(FLAT3, PointSample((0.2, 0.1, -0.4), 0))
        assert not conn.gamma.val.any()

    def test_exponential_plane(self):
        p = PointSample((0.3, 0.8), 0)
        g = christoffel(EXP2, p).gamma.val
        assert g[0, 1, 1] == pytest.approx(-np.exp(0.6), rel=1e-14)
        assert g[1, 0, 1] == pytest.approx(1.0, rel=1e-14)

    def test_warped_metric(self):
        p = PointSample((0.0, 0.0, 0.1, 0.2, 0.3), 0)
        g = christoffel(WARPED, p).gamma.val
        assert g[0, 2, 2] == pytest.approx(-1.0, rel=1e-14)
        assert g[2, 0, 2] == pytest.approx(1.0, rel=1e-14)

    def test_symmetry_exact(self):
        p = PointSample((0.4, -0.2, 0.5, 0.1, -0.3), 0)
        g = christoffel(WARPED, p).gamma.val
        assert np.array_equal(g, np.transpose(g, (0, 2, 1)))

    def test_metric_compatibility(self):
        # d_i g_jk - Gamma^l_ij g_lk - Gamma^l_ik g_jl = 0
        p = PointSample((0.3, -0.1, 0.2, 0.4, -0.5), 0)
        geo = geometry(WARPED, p)
        dg = geo.g.partial_all().val  # dg[a,b,z]
        gamma = geo.gamma.val
        lhs = (
            np.transpose(dg, (2, 0, 1))
            - np.einsum("lij,lk->ijk", gamma, geo.gval)
            - np.einsum("lik,jl->ijk", gamma, geo.gval)
        )
        assert np.max(np.abs(lhs)) <= 1e-10

    def test_singular_metric(self):
        ch = ChartManifold(["x", "y"], [["x", "0"], ["0", "x"]], domain={"x": (-1, 1)})
        with pytest.raises(SingularMatrixError):
            christoffel(ch, PointSample((0.0, 0.5), 0))

    def test_nabla_g_vanishes(self):
        p = PointSample((0.1, 0.2, -0.3, 0.4, 0.5), 0)
        geo = geometry(WARPED, p)
        ng = nabla_tensor(geo.g, "dd", geo)
        assert np.max(np.abs(ng.val)) <= 1e-10


class TestCovariantDerivative:
    def test_constant_field_flat(self):
        f = VectorField(FLAT3, ["1", "2", "3"])
        out = covariant_derivative(f, [1.0, 0.0, 0.0], PointSample((0.1, 0.2, 0.3), 0))
        assert not out.val.any()

    def test_cosymplectic_phi_parallel(self):
        s = catalog("cosymplectic_r3").build()
        out = covariant_derivative(s.phi, [0.3, -0.2, 0.5], PointSample((0.1, 0.4, 0.2), 0))
        assert not out.val.any()

    def test_warped_reeb_acceleration(self):
        # nabla_xi xi = -d_u for xi = e^{-u} d_c
        xi = VectorField(WARPED, ["0", "0", "0", "0", "exp(-u)"])
        p = PointSample((0.0, 0.1, 0.2, -0.2, 0.4), 0)
        xival = eval_field(xi, p, order=0)
        out = covariant_derivative(xi, xival, p)
        assert np.allclose(out.val, [-1.0, 0.0, 0.0, 0.0, 0.0], atol=1e-14)

    def test_covector_valence(self):
        eta = CovectorField(WARPED, ["0", "0", "0", "0", "exp(u)"])
        p = PointSample((0.0, 0.0, 0.0, 0.0, 0.0), 0)
        out = covariant_derivative(eta, [1.0, 0.0, 0.0, 0.0, 0.0], p)
        # (nabla_u eta)_c = d_u(e^u) - Gamma^c_uc e^u = 0
        assert abs(out.val[4]) <= 1e-14


class TestExteriorDerivative:
    def test_exact_form_closed(self):
        dz = CovectorField(FLAT3, ["0", "0", "1"])
        out = exterior_derivative(dz, PointSample((0.1, 0.2, 0.3), 0))
        assert not out.val.any()

    def test_half_convention(self):
        eta = CovectorField(WARPED, ["0", "0", "0", "0", "exp(u)"])
        p = PointSample((0.0, 0.3, 0.1, 0.2, -0.1), 0)
        de = exterior_derivative(eta, p)
        assert de.val[0, 4] == pytest.approx(0.5, rel=1e-14)
        assert de.val[4, 0] == pytest.approx(-0.5, rel=1e-14)
        # d eta = eta ^ omega for omega = -du under the same convention
        eta_v = np.array([0, 0, 0, 0, 1.0])
        om = np.array([-1.0, 0, 0, 0, 0])
        wedge = 0.5 * (np.outer(eta_v, om) - np.outer(om, eta_v))
        assert np.allclose(de.val, wedge, atol=1e-14)

    def test_d_squared_zero_on_catalog_one_forms(self):
        from contactgeo.catalog import catalog_names

        for name in catalog_names():
            entry = catalog(name).build()
            s = entry.total if hasattr(entry, "total") else entry
            if not hasattr(s, "eta"):
                continue
            for ps in sample_points(s.chart, 16, 31):
                eta_jets = eval_field(s.eta, ps, order=2)
                dde = exterior_derivative_comps(exterior_derivative_comps(eta_jets))
                assert np.max(np.abs(dde.val)) <= 1e-8, name

    def test_fundamental_form_closed_for_cosymplectic(self):
        s = catalog("cosymplectic_r3").build()
        ctx = s.at(PointSample((0.2, -0.1, 0.3), 0))
        assert np.max(np.abs(ctx.dphi.val)) <= 1e-15


class TestCodifferential:
    def test_cosymplectic_coclosed(self):
        s = catalog("cosymplectic_r3").build()
        eta = s.eta
        out = codifferential(eta, PointSample((0.1, 0.2, 0.3), 0))
        assert abs(float(out.val)) <= 1e-14

    def test_warped_eta_coclosed(self):
        eta = CovectorField(WARPED, ["0", "0", "0", "0", "exp(u)"])
        out = codifferential(eta, PointSample((0.2, -0.4, 0.1, 0.5, 0.3), 0))
        assert abs(float(out.val)) <= 1e-12

    def test_sasakian_fundamental_form_trace(self):
        s = catalog("sasakian_r5").build()
        ctx = s.at(PointSample((0.1, 0.2, -0.3, 0.4, 0.2), 0))
        # delta(phiform)(xi) = 2m alpha = 4 for the unit-constant model
        assert float(ctx.delta_phi.val @ ctx.xi.val) == pytest.approx(4.0, abs=1e-12)


class TestTwoForms:
    def test_exterior_derivative_of_two_form_field(self):
        from contactgeo.manifold import TwoFormField

        # b = x dy ^ dz (antisymmetric components with the 1/2 convention)
        comps = [["0", "0", "0"], ["0", "0", "x/2"], ["0", "-x/2", "0"]]
        b = TwoFormField(FLAT3, comps)
        db = exterior_derivative(b, PointSample((0.4, 0.1, 0.2), 0))
        # (db)(dx, dy, dz) = (1/3)(d_x b_yz + 0 + 0) = 1/6
        assert db.val[0, 1, 2] == pytest.approx(1.0 / 6.0, abs=1e-15)
        assert db.val[1, 0, 2] == pytest.approx(-1.0 / 6.0, abs=1e-15)

    def test_codifferential_of_two_form_field(self):
        from contactgeo.manifold import TwoFormField

        comps = [["0", "x", "0"], ["-x", "0", "0"], ["0", "0", "0"]]
        b = TwoFormField(FLAT3, comps)
        out = codifferential(b, PointSample((0.2, 0.5, -0.1), 0))
        # delta b = -sum_i (nabla_{e_i} b)(e_i, .) = (0, -1, 0) for b_xy = x
        assert np.allclose(out.val, [0.0, -1.0, 0.0], atol=1e-14)

    def test_covariant_derivative_of_metric_vanishes(self):
        out = covariant_derivative(WARPED, [0.3, -0.2, 0.1, 0.5, 0.4],
                                   PointSample((0.2, 0.1, -0.3, 0.4, 0.0), 0))
        assert np.max(np.abs(out.val)) <= 1e-10


class TestNijenhuis:
    def test_flat_kahler_integrable(self):
        s = catalog("flat_kahler_r4").build()
        x = VectorField(s.chart, ["1", "0", "0", "0"])
        y = VectorField(s.chart, ["0", "0", "1", "0"])
        out = nijenhuis(s.j, x, y, PointSample((0.1, 0.2, 0.3, 0.4), 0))
        assert not out.any()

    def test_kodaira_thurston_witness(self):
        s = catalog("kodaira_thurston").build()
        e1 = VectorField(s.chart, ["1", "0", "0", "0"])
        e2 = VectorField(s.chart, ["0", "1", "x1", "0"])
        p = PointSample((0.7, 0.1, -0.2, 0.5), 0)
        out = nijenhuis(s.j, e1, e2, p)
        assert np.allclose(out, [0.0, 0.0, -1.0, 0.0], atol=1e-13)
        assert s.at(p).norm(out) == pytest.approx(1.0, abs=1e-13)

    def test_cosymplectic_vanishes(self):
        s = catalog("cosymplectic_r3").build()
        a = VectorField(s.chart, ["1", "0", "0"])
        b = VectorField(s.chart, ["0", "1", "0"])
        assert not nijenhuis(s.phi, a, b, PointSample((0.3, 0.2, 0.1), 0)).any()

    def test_antisymmetry(self):
        s = catalog("kodaira_thurston").build()
        rng = np.random.default_rng(4)
        p = PointSample((0.3, -0.5, 0.2, 0.6), 0)
        nt = s.at(p).nijenhuis.val
        for _ in range(4):
            x, y = rng.standard_normal(4), rng.standard_normal(4)
            n_xy = np.einsum("kij,i,j->k", nt, x, y)
            n_yx = np.einsum("kij,i,j->k", nt, y, x)
            assert np.max(np.abs(n_xy + n_yx)) <= 1e-12
