"""Sampling configuration, random tangent vectors and residual scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Sampling:
    """Sampled-falsification budget: points x vector tuples per point."""

    points: int = 32
    vectors: int = 8
    seed: int = 42
    tol: float = 1e-7

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("sampling needs at least one point")
        if self.vectors < 1:
            raise ValueError("sampling needs at least one vector tuple")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


def random_unit_vectors(rng: np.random.Generator, gval: np.ndarray, count: int,
                        project=None) -> list[np.ndarray]:
    """Deterministic g-unit tangent vectors, optionally projected first."""
    out = []
    d = gval.shape[0]
    while len(out) < count:
        v = rng.standard_normal(d)
        if project is not None:
            v = project(v)
        n2 = float(v @ gval @ v)
        if n2 < 1e-12:
            continue
        out.append(v / np.sqrt(n2))
    return out


def residual(lhs, rhs, gval=None) -> float:
    """Scale-robust residual |lhs - rhs| / (1 + |lhs| + |rhs|).

    Scalars use absolute values; vectors the g-norm when a metric is given,
    the Euclidean norm otherwise.
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    diff = lhs - rhs
    if lhs.ndim == 0:
        return float(abs(diff) / (1.0 + abs(lhs) + abs(rhs)))
    if lhs.ndim == 1 and gval is not None:
        def nrm(v):
            return np.sqrt(max(float(v @ gval @ v), 0.0))
    else:
        def nrm(v):
            return float(np.linalg.norm(v.ravel()))
    return float(nrm(diff) / (1.0 + nrm(lhs) + nrm(rhs)))


def verdict_for(max_residual: float, tol: float) -> str:
    """holds / fails / inconclusive with the 100x gray zone."""
    if max_residual < tol:
        return "holds"
    if max_residual > 100.0 * tol:
        return "fails"
    return "inconclusive"
