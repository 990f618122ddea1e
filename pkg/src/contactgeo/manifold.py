"""Single-chart manifold model: coordinates, sampling box, tensor fields as
expression arrays, pointwise jet evaluation, orthonormal frames, Lie brackets.

Fields are stored as expressions, never as closures, so they can be re-seeded
at any jet order.  Everything here is immutable after construction and
evaluation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from . import tape as tape_mod
from .errors import DomainBoxError
from .expr import ExprLike, as_expr
from .jets import JetArray, gram_schmidt_extend, jt_einsum

DEFAULT_BOX = (-1.0, 1.0)


class ChartManifold:
    """A manifold presented on one global chart.

    coords: ordered coordinate names; domain: per-coordinate closed sampling
    interval; metric: dim x dim array of scalar-field expressions (symmetric,
    positive definite on the sampling box).
    """

    def __init__(
        self,
        coords: Sequence[str],
        metric,
        domain: Optional[Mapping[str, tuple]] = None,
    ):
        self.coords = tuple(coords)
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("duplicate coordinate names")
        d = len(self.coords)
        rows = [[as_expr(metric[i][j]) for j in range(d)] for i in range(d)]
        self.metric = np.empty((d, d), dtype=object)
        for i in range(d):
            for j in range(d):
                self.metric[i, j] = rows[i][j]
        box = dict(domain or {})
        unknown = set(box) - set(self.coords)
        if unknown:
            raise ValueError(f"domain given for unknown coordinates: {sorted(unknown)}")
        self.domain = tuple(tuple(map(float, box.get(c, DEFAULT_BOX))) for c in self.coords)
        self._check_free_vars(self.metric.ravel())
        self._geometry_cache = {}

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check_free_vars(self, exprs) -> None:
        allowed = set(self.coords)
        for e in exprs:
            extra = set(e.free_vars) - allowed
            if extra:
                raise ValueError(
                    f"expression '{e}' uses unknown coordinates {sorted(extra)}"
                )

    def contains(self, point) -> bool:
        return all(
            lo - 1e-12 <= x <= hi + 1e-12
            for x, (lo, hi) in zip(point, self.domain)
        )

    def point_map(self, point) -> dict:
        return dict(zip(self.coords, point))

    def validate_metric(self, points, tol: float = 1e-12) -> list[str]:
        """Numeric symmetry and positive-definiteness checks at sample points."""
        problems = []
        for ps in points:
            g = eval_exprs(self, self.metric, ps.point, order=0)
            if np.max(np.abs(g - g.T)) > tol:
                problems.append(
                    f"metric asymmetry {np.max(np.abs(g - g.T)):.3e} at {ps.point}"
                )
            try:
                np.linalg.cholesky(g)
            except np.linalg.LinAlgError:
                problems.append(f"metric not positive definite at {ps.point}")
        return problems


@dataclass(frozen=True)
class PointSample:
    """A sampled chart point together with the seed that produced it."""

    point: tuple
    rng_seed: int

    def __post_init__(self):
        object.__setattr__(self, "point", tuple(float(x) for x in self.point))


def sample_points(chart: ChartManifold, n: int, seed: int) -> list[PointSample]:
    """Deterministic points drawn uniformly from the chart's sampling box."""
    rng = np.random.default_rng(seed)
    lo = np.array([a for a, _ in chart.domain])
    hi = np.array([b for _, b in chart.domain])
    pts = rng.uniform(size=(n, chart.dim)) * (hi - lo) + lo
    return [PointSample(tuple(p), seed) for p in pts]


class _Field:
    kind = "field"

    def __init__(self, chart: ChartManifold, components):
        self.chart = chart
        self.components = components
        chart._check_free_vars(np.ravel(components))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.chart.dim})"


class VectorField(_Field):
    valence = "u"

    def __init__(self, chart, components: Sequence[ExprLike]):
        comps = np.empty(chart.dim, dtype=object)
        for i, e in enumerate(components):
            comps[i] = as_expr(e)
        if len(components) != chart.dim:
            raise ValueError("component count must match chart dimension")
        super().__init__(chart, comps)


class CovectorField(_Field):
    valence = "d"

    def __init__(self, chart, components: Sequence[ExprLike]):
        if len(components) != chart.dim:
            raise ValueError("component count must match chart dimension")
        comps = np.empty(chart.dim, dtype=object)
        for i, e in enumerate(components):
            comps[i] = as_expr(e)
        super().__init__(chart, comps)


class EndoField(_Field):
    """(1,1) tensor field; components[i, j] is the i-th component of the
    image of the j-th coordinate vector."""

    valence = "ud"

    def __init__(self, chart, components):
        d = chart.dim
        comps = np.empty((d, d), dtype=object)
        rows = list(components)
        if len(rows) != d:
            raise ValueError("component count must match chart dimension")
        for i in range(d):
            row = list(rows[i])
            if len(row) != d:
                raise ValueError("component count must match chart dimension")
            for j in range(d):
                comps[i, j] = as_expr(row[j])
        super().__init__(chart, comps)


class TwoFormField(_Field):
    valence = "dd"

    def __init__(self, chart, components):
        d = chart.dim
        comps = np.empty((d, d), dtype=object)
        for i in range(d):
            for j in range(d):
                comps[i, j] = as_expr(components[i][j])
        super().__init__(chart, comps)


def eval_exprs(chart: ChartManifold, exprs, point, order: int = 2):
    """Evaluate an object-array of expressions at a point.

    Returns a plain ndarray for order 0 and a JetArray seeded on all chart
    coordinates otherwise.
    """
    arr = np.asarray(exprs, dtype=object)
    d = chart.dim
    x = np.array([list(map(float, point))])
    flat = arr.ravel()
    vals = np.empty(flat.shape[0])
    grads = np.zeros((flat.shape[0], d))
    hesss = np.zeros((flat.shape[0], d, d))
    seedm = np.eye(d)
    for k, e in enumerate(flat):
        tape = e.tape_for(chart.coords)
        val, grad, hess = tape_mod.run_tape(tape, x, seedm)
        vals[k] = val[0]
        grads[k] = grad[0]
        hesss[k] = hess[0]
    shape = arr.shape
    if order == 0:
        return vals.reshape(shape)
    out = JetArray(
        vals.reshape(shape),
        grads.reshape(shape + (d,)),
        hesss.reshape(shape + (d, d)) if order >= 2 else None,
        min(order, 2),
    )
    return out


def eval_field(field, p: PointSample, order: int = 2):
    """Evaluate a field (or a chart's metric) at a sample point.

    order 0 returns plain component values; order 1 or 2 returns a JetArray
    seeded on all chart coordinates.
    """
    if isinstance(field, ChartManifold):
        chart, comps = field, field.metric
    else:
        chart, comps = field.chart, field.components
    point = p.point if isinstance(p, PointSample) else tuple(p)
    if not chart.contains(point):
        raise DomainBoxError(f"point {point} outside the sampling box")
    return eval_exprs(chart, comps, point, order=order)


def metric_jets(chart: ChartManifold, point) -> JetArray:
    return eval_exprs(chart, chart.metric, point, order=2)


def orthonormal_frame(
    chart: ChartManifold,
    p: PointSample,
    preferred: Optional[Sequence[VectorField]] = None,
) -> JetArray:
    """g-orthonormal jet frame (rows) extending the preferred fields by
    coordinate directions.  Deterministic given inputs."""
    point = p.point if isinstance(p, PointSample) else tuple(p)
    g = metric_jets(chart, point)
    d = chart.dim
    candidates = []
    for f in preferred or []:
        candidates.append(eval_field(f, PointSample(point, 0), order=2))
    for i in range(d):
        candidates.append(JetArray.constant(np.eye(d)[i], d))
    return gram_schmidt_extend(candidates, g, d)


def bracket_jets(xj: JetArray, yj: JetArray) -> JetArray:
    """[X, Y] from jet-valued components; output order is one lower."""
    dx = xj.partial_all()  # dx[k, z] = d_z X^k
    dy = yj.partial_all()
    return jt_einsum("z,kz->k", xj.truncate(dx.order), dy) - jt_einsum(
        "z,kz->k", yj.truncate(dy.order), dx
    )


def lie_bracket(x: VectorField, y: VectorField, p: PointSample) -> np.ndarray:
    """[X, Y]^i = X^j d_j Y^i - Y^j d_j X^i, evaluated with jets."""
    xj = eval_field(x, p, order=2)
    yj = eval_field(y, p, order=2)
    return bracket_jets(xj, yj).val
