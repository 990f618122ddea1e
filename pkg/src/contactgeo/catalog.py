"""Builders for explicit structures and the fixed catalog of models used by
tests, the acceptance suite and the CLI.

Catalog names are stable CLI-addressable identifiers.  Each entry records
the classification verdicts the model is expected to produce; the test
suite checks the whole table against ``classify``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._ast import Fn
from .classify import Sampling, classify
from .errors import UnknownCatalogError
from .expr import ScalarFieldExpr, as_expr, parse
from .manifold import ChartManifold, CovectorField, EndoField, VectorField, sample_points
from .structures import AcmStructure, AhStructure
from .submersion import SubmersionSpec


def _exp(e: ScalarFieldExpr) -> ScalarFieldExpr:
    return ScalarFieldExpr(Fn("exp", e.ast))


def _zero():
    return as_expr(0)


# ---- construction operations ----


def build_product(base: AhStructure, fibre: AcmStructure) -> SubmersionSpec:
    """Product submersion: phi = J (+) phi_hat, eta = c eta_hat,
    xi = (1/c) xi_hat, g = g' (+) c^2 g_hat with c = r/(n+r)."""
    n, r = base.n, fibre.m
    if r < 1:
        raise ValueError("the fibre must have dimension at least 3")
    c = r / (n + r)
    return _assemble_split_submersion(base, fibre, scale=as_expr(c * c), eta_factor=as_expr(c))


def build_warped(base: AhStructure, fibre: AcmStructure, f) -> SubmersionSpec:
    """Warped submersion over a surface: g = g' (+) f^2 g_hat, eta = f eta_hat,
    xi = (1/f) xi_hat, with a positive warping function f on the base."""
    if base.chart.dim != 2:
        raise ValueError("the warped construction needs a 2-dimensional base")
    f = as_expr(f)
    extra = set(f.free_vars) - set(base.chart.coords)
    if extra:
        raise ValueError(f"warping function uses non-base coordinates {sorted(extra)}")
    for ps in sample_points(base.chart, 16, 11):
        if f.eval_value(base.chart.point_map(ps.point)) <= 0.0:
            raise ValueError(f"warping function must be positive (f <= 0 at {ps.point})")
    return _assemble_split_submersion(base, fibre, scale=f * f, eta_factor=f)


def _assemble_split_submersion(
    base: AhStructure, fibre: AcmStructure, scale: ScalarFieldExpr, eta_factor: ScalarFieldExpr
) -> SubmersionSpec:
    bch, fch = base.chart, fibre.chart
    overlap = set(bch.coords) & set(fch.coords)
    if overlap:
        raise ValueError(f"base and fibre coordinate names collide: {sorted(overlap)}")
    coords = bch.coords + fch.coords
    nb, nv = bch.dim, fch.dim
    d = nb + nv
    zero = _zero()
    metric = [[zero for _ in range(d)] for _ in range(d)]
    phi = [[zero for _ in range(d)] for _ in range(d)]
    for i in range(nb):
        for j in range(nb):
            metric[i][j] = bch.metric[i, j]
            phi[i][j] = base.j.components[i, j]
    for i in range(nv):
        for j in range(nv):
            gh = fch.metric[i, j]
            metric[nb + i][nb + j] = gh if gh.is_zero() else scale * gh
            phi[nb + i][nb + j] = fibre.phi.components[i, j]
    eta = [zero] * nb + [
        e if e.is_zero() else eta_factor * e for e in fibre.eta.components
    ]
    xi = [zero] * nb + [
        e if e.is_zero() else e / eta_factor for e in fibre.xi.components
    ]
    domain = {c: bch.domain[i] for i, c in enumerate(bch.coords)}
    domain.update({c: fch.domain[i] for i, c in enumerate(fch.coords)})
    chart = ChartManifold(coords, metric, domain=domain)
    total = AcmStructure(
        chart, EndoField(chart, phi), VectorField(chart, xi), CovectorField(chart, eta)
    )
    return SubmersionSpec(total, base, projection=list(bch.coords))


def build_conformal_change(s: AcmStructure, rho) -> AcmStructure:
    """Conformal transform with potential rho: the result carries
    (phi, exp(rho) xi, exp(-rho) eta, exp(-2 rho) g); rescaling the result
    by exp(2 rho) recovers the input, and the result's Lee form gains d(rho).

    Applying rho and then -rho is the identity.
    """
    rho = as_expr(rho)
    ch = s.chart
    extra = set(rho.free_vars) - set(ch.coords)
    if extra:
        raise ValueError(f"conformal potential uses unknown coordinates {sorted(extra)}")
    e_m2rho = _exp(as_expr(-2) * rho)
    e_mrho = _exp(-rho)
    e_rho = _exp(rho)
    d = ch.dim

    def scaled(e, factor):
        return e if e.is_zero() else factor * e

    metric = [[scaled(ch.metric[i, j], e_m2rho) for j in range(d)] for i in range(d)]
    chart = ChartManifold(ch.coords, metric, domain=dict(zip(ch.coords, ch.domain)))
    phi = EndoField(chart, [[s.phi.components[i, j] for j in range(d)] for i in range(d)])
    xi = VectorField(chart, [scaled(e, e_rho) for e in s.xi.components])
    eta = CovectorField(chart, [scaled(e, e_mrho) for e in s.eta.components])
    return AcmStructure(chart, phi, xi, eta)


def build_c12_model(base: AhStructure, f) -> SubmersionSpec:
    """Line-times-Kaehler model: coordinates (base..., t), g = g' (+) f^2 dt^2,
    phi = J (+) 0, eta = f dt, xi = (1/f) d_t; projection forgets t."""
    rep = classify(base, "kahler", Sampling(points=8, vectors=4, seed=13))
    if rep.verdict != "holds":
        raise ValueError(
            f"the base must be Kaehler (verdict {rep.verdict}, residual {rep.max_residual:.3e})"
        )
    f = as_expr(f)
    bch = base.chart
    if "t" in bch.coords:
        raise ValueError("base coordinates may not be named 't'")
    allowed = set(bch.coords) | {"t"}
    extra = set(f.free_vars) - allowed
    if extra:
        raise ValueError(f"the function uses unknown coordinates {sorted(extra)}")
    for ps in sample_points(bch, 16, 11):
        pt = bch.point_map(ps.point)
        pt["t"] = 0.37
        if f.eval_value(pt) <= 0.0:
            raise ValueError(f"the function must be positive (f <= 0 at {ps.point})")
    coords = bch.coords + ("t",)
    nb = bch.dim
    d = nb + 1
    zero = _zero()
    metric = [[zero for _ in range(d)] for _ in range(d)]
    phi = [[zero for _ in range(d)] for _ in range(d)]
    for i in range(nb):
        for j in range(nb):
            metric[i][j] = bch.metric[i, j]
            phi[i][j] = base.j.components[i, j]
    metric[nb][nb] = f * f
    eta = [zero] * nb + [f]
    xi = [zero] * nb + [as_expr(1) / f]
    domain = {c: bch.domain[i] for i, c in enumerate(bch.coords)}
    chart = ChartManifold(coords, metric, domain=domain)
    total = AcmStructure(
        chart, EndoField(chart, phi), VectorField(chart, xi), CovectorField(chart, eta)
    )
    return SubmersionSpec(total, base, projection=list(bch.coords))


# ---- concrete models ----


def _flat_metric(names):
    d = len(names)
    return [["1" if i == j else "0" for j in range(d)] for i in range(d)]


def flat_kahler(names=("x1", "y1", "x2", "y2"), scale: float = 1.0) -> AhStructure:
    """Flat Kaehler plane pairs: J maps d/dx_i to -d/dy_i."""
    d = len(names)
    metric = [[str(scale) if i == j else "0" for j in range(d)] for i in range(d)]
    jm = [["0"] * d for _ in range(d)]
    for k in range(d // 2):
        jm[2 * k][2 * k + 1] = "1"
        jm[2 * k + 1][2 * k] = "-1"
    chart = ChartManifold(names, metric)
    return AhStructure(chart, EndoField(chart, jm))


def _kodaira_thurston() -> AhStructure:
    coords = ("x1", "x2", "x3", "x4")
    metric = [
        ["1", "0", "0", "0"],
        ["0", "1 + x1^2", "-x1", "0"],
        ["0", "-x1", "1", "0"],
        ["0", "0", "0", "1"],
    ]
    # frame e1 = d1, e2 = d2 + x1 d3, e3 = d3, e4 = d4 is orthonormal;
    # J e1 = e3, J e2 = e4, J e3 = -e1, J e4 = -e2 written in coordinates
    jm = [
        ["0", "x1", "-1", "0"],
        ["0", "0", "0", "-1"],
        ["1", "0", "0", "-x1"],
        ["0", "1", "0", "0"],
    ]
    chart = ChartManifold(coords, metric)
    return AhStructure(chart, EndoField(chart, jm))


def _cosymplectic(names) -> AcmStructure:
    """Flat cosymplectic model on R^(2k+1); the last coordinate is the Reeb
    direction."""
    d = len(names)
    chart = ChartManifold(names, _flat_metric(names))
    phi = [["0"] * d for _ in range(d)]
    for k in range((d - 1) // 2):
        phi[2 * k][2 * k + 1] = "-1"
        phi[2 * k + 1][2 * k] = "1"
    xi = ["0"] * (d - 1) + ["1"]
    eta = ["0"] * (d - 1) + ["1"]
    return AcmStructure(
        chart, EndoField(chart, phi), VectorField(chart, xi), CovectorField(chart, eta)
    )


def _sasakian(pair_names, z: str = "z") -> AcmStructure:
    """Standard odd-dimensional model with eta = (dz - sum y dx)/2, xi = 2 dz,
    g = eta (x) eta + (1/4) sum (dx^2 + dy^2)."""
    m = len(pair_names)
    coords = [c for pair in pair_names for c in pair] + [z]
    d = 2 * m + 1
    eta = []
    for x, y in pair_names:
        eta.extend([f"-{y}/2", "0"])
    eta.append("1/2")
    eta_exprs = [parse(e) for e in eta]
    metric = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            e = eta_exprs[i] * eta_exprs[j]
            if i == j and i < 2 * m:
                e = e + parse("1/4")
            metric[i][j] = e
    phi = [["0"] * d for _ in range(d)]
    for k, (x, y) in enumerate(pair_names):
        ix, iy = 2 * k, 2 * k + 1
        phi[iy][ix] = "-1"  # phi dx = -dy
        phi[ix][iy] = "1"  # phi dy = dx + y dz
        phi[d - 1][iy] = y
    xi = ["0"] * (d - 1) + ["2"]
    chart = ChartManifold(coords, metric)
    return AcmStructure(
        chart, EndoField(chart, phi), VectorField(chart, xi), CovectorField(chart, eta)
    )


@dataclass
class CatalogEntry:
    name: str
    kind: str  # acm | ah | submersion
    builder: Callable[[], object]
    expected_classes: tuple = ()
    description: str = ""
    _built: object = field(default=None, repr=False)

    def build(self):
        if self._built is None:
            self._built = self.builder()
        return self._built


def _build_hopf_like() -> SubmersionSpec:
    total = _sasakian([("x1", "y1"), ("x2", "y2")])
    base = flat_kahler(("x1", "y1", "x2", "y2"), scale=0.25)
    return SubmersionSpec(total, base, projection=["x1", "y1", "x2", "y2"])


def _build_example31() -> SubmersionSpec:
    return build_product(_kodaira_thurston(), _cosymplectic(("a1", "b1", "a2", "b2", "c")))


def _build_example32() -> SubmersionSpec:
    return build_product(flat_kahler(), _sasakian([("a", "b")], z="c"))


def _build_warped_s4() -> SubmersionSpec:
    base = flat_kahler(("u", "v"))
    fibre = _cosymplectic(("a", "b", "c"))
    return build_warped(base, fibre, "exp(u)")


def _build_c12_model() -> SubmersionSpec:
    return build_c12_model(flat_kahler(), "exp(x1)")


_HOLDS_ALL_ACM = (
    ("cosymplectic", "holds"),
    ("almost_cosymplectic", "holds"),
    ("quasi_sasakian", "holds"),
    ("normality", "holds"),
    ("alpha_sasakian", "holds"),
    ("C12", "holds"),
    ("lc_almost_quasi_sasakian", "holds"),
    ("lc_almost_cosymplectic", "holds"),
    ("lc_cosymplectic", "holds"),
    ("C4_C6_C7", "holds"),
)

_SASAKIAN_CLASSES = (
    ("alpha_sasakian", "holds"),
    ("quasi_sasakian", "holds"),
    ("normality", "holds"),
    ("lc_almost_quasi_sasakian", "holds"),
    ("C4_C6_C7", "holds"),
    ("cosymplectic", "fails"),
    ("almost_cosymplectic", "fails"),
    ("C12", "fails"),
    ("lc_cosymplectic", "fails"),
    ("lc_almost_cosymplectic", "fails"),
)

_REGISTRY: dict[str, CatalogEntry] = {}


def _entry(name, kind, builder, expected=(), description=""):
    _REGISTRY[name] = CatalogEntry(name, kind, builder, tuple(expected), description)


_entry(
    "flat_kahler_r4", "ah", flat_kahler,
    expected=(
        ("kahler", "holds"),
        ("almost_kahler", "holds"),
        ("W2_W4", "holds"),
        ("W4", "holds"),
    ),
    description="flat Kaehler structure on R^4",
)
_entry(
    "kodaira_thurston", "ah", _kodaira_thurston,
    expected=(
        ("almost_kahler", "holds"),
        ("W2_W4", "holds"),
        ("kahler", "fails"),
        ("W4", "fails"),
    ),
    description="chart model of the Kodaira-Thurston almost Kaehler surface",
)
_entry(
    "cosymplectic_r3", "acm", lambda: _cosymplectic(("a", "b", "c")),
    expected=_HOLDS_ALL_ACM,
    description="flat cosymplectic structure on R^3",
)
_entry(
    "cosymplectic_r5", "acm", lambda: _cosymplectic(("a1", "b1", "a2", "b2", "c")),
    expected=_HOLDS_ALL_ACM,
    description="flat cosymplectic structure on R^5",
)
_entry(
    "sasakian_r3", "acm", lambda: _sasakian([("a", "b")], z="c"),
    expected=_SASAKIAN_CLASSES,
    description="standard Sasakian structure on R^3",
)
_entry(
    "sasakian_r5", "acm", lambda: _sasakian([("x1", "y1"), ("x2", "y2")]),
    expected=_SASAKIAN_CLASSES,
    description="standard Sasakian structure on R^5",
)
_entry(
    "hopf_like_r5_to_r4", "submersion", _build_hopf_like,
    expected=_SASAKIAN_CLASSES,
    description="Sasakian R^5 projecting onto the flat Kaehler R^4 (Hopf-type chart model)",
)
_entry(
    "example31_kt", "submersion", _build_example31,
    expected=(
        ("almost_cosymplectic", "holds"),
        ("lc_almost_quasi_sasakian", "holds"),
        ("lc_almost_cosymplectic", "holds"),
        ("cosymplectic", "fails"),
        ("quasi_sasakian", "fails"),
        ("normality", "fails"),
        ("lc_cosymplectic", "fails"),
        ("C4_C6_C7", "fails"),
        ("C12", "fails"),
        ("alpha_sasakian", "fails"),
    ),
    description="Kodaira-Thurston base times a 5-dimensional cosymplectic fibre",
)
_entry(
    "example32_qs", "submersion", _build_example32,
    expected=(
        ("quasi_sasakian", "holds"),
        ("normality", "holds"),
        ("lc_almost_quasi_sasakian", "holds"),
        ("C4_C6_C7", "holds"),
        ("almost_cosymplectic", "fails"),
        ("cosymplectic", "fails"),
        ("alpha_sasakian", "fails"),
        ("C12", "fails"),
        ("lc_cosymplectic", "fails"),
        ("lc_almost_cosymplectic", "fails"),
    ),
    description="flat Kaehler base times a 3-dimensional Sasakian fibre",
)
_entry(
    "warped_s4", "submersion", _build_warped_s4,
    expected=(
        ("lc_cosymplectic", "holds"),
        ("lc_almost_cosymplectic", "holds"),
        ("lc_almost_quasi_sasakian", "holds"),
        ("almost_cosymplectic", "fails"),
        ("cosymplectic", "fails"),
        ("quasi_sasakian", "fails"),
        ("normality", "fails"),
        ("C12", "fails"),
        ("C4_C6_C7", "fails"),
        ("alpha_sasakian", "fails"),
    ),
    description="flat Kaehler plane warped against a cosymplectic R^3 by f = exp(u)",
)
_entry(
    "c12_model", "submersion", _build_c12_model,
    expected=(
        ("C12", "holds"),
        ("lc_almost_quasi_sasakian", "holds"),
        ("almost_cosymplectic", "fails"),
        ("cosymplectic", "fails"),
        ("quasi_sasakian", "fails"),
        ("normality", "fails"),
        ("alpha_sasakian", "fails"),
        ("lc_cosymplectic", "fails"),
        ("lc_almost_cosymplectic", "fails"),
        ("C4_C6_C7", "fails"),
    ),
    description="interval times flat Kaehler R^4 with f = exp(x1), projecting onto the plane factor",
)


def catalog(name: str) -> CatalogEntry:
    entry = _REGISTRY.get(name)
    if entry is None:
        raise UnknownCatalogError(name, catalog_names())
    return entry


def catalog_names() -> tuple[str, ...]:
    return tuple(_REGISTRY)
