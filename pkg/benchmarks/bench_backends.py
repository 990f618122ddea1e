"""Benchmark the numba tape kernel against the pure-numpy fallback.

Two workloads:
  1. batch jet evaluation of representative field expressions (the hot leaf
     kernel of every classification / verification run);
  2. an end-to-end geometry pass (metric, inverse, Christoffel symbols,
     covariant derivative of the structure tensor) at many sample points.

Run:  python benchmarks/bench_backends.py [--batch 20000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from contactgeo import backends
from contactgeo.catalog import catalog
from contactgeo.expr import parse
from contactgeo.manifold import sample_points

EXPRESSIONS = {
    "warped metric entry": ("exp(2*u)", ("u", "v")),
    "reeb covector": ("exp(u)", ("u", "v")),
    "sasakian metric entry": ("y1*y2/4", ("x1", "y1", "x2", "y2", "z")),
    "mixed transcendental": ("exp(2*u)*sin(v) + sqrt(1 + u^2)/(2 + cos(u*v))", ("u", "v")),
    "quartic polynomial": ("x1^4 + 2*x1^2*x2^2 - 0.5*x2^3 + x1*x2", ("x1", "x2")),
}


def time_call(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_tape(batch: int, repeat: int) -> None:
    print(f"-- tape evaluation, batch of {batch} points (best of {repeat}) --")
    header = f"{'expression':28s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}"
    print(header)
    rng = np.random.default_rng(0)
    for label, (src, names) in EXPRESSIONS.items():
        e = parse(src)
        tape = e.tape_for(tuple(names))
        x = rng.uniform(0.1, 0.9, size=(batch, len(names)))
        seedm = np.eye(len(names))
        backends.execute(tape, x, seedm, backend="numba")  # warm the JIT
        t_nb = time_call(lambda: backends.execute(tape, x, seedm, backend="numba"), repeat)
        t_np = time_call(lambda: backends.execute(tape, x, seedm, backend="numpy"), repeat)
        print(f"{label:28s} {t_nb * 1e3:9.2f} ms {t_np * 1e3:9.2f} ms {t_np / t_nb:8.1f}x")


def bench_geometry(points: int, repeat: int) -> None:
    print(f"\n-- geometry pass on catalog:warped_s4, {points} points (best of {repeat}) --")
    spec = catalog("warped_s4").build()
    pts = sample_points(spec.total.chart, points, 7)

    def run():
        spec.total._points.clear()
        spec.total.chart._geometry_cache.clear()
        for ps in pts:
            ctx = spec.total.at(ps)
            ctx.nabla_phi
            ctx.lee

    for which in ("numba", "numpy"):
        old = backends.ACTIVE
        backends.ACTIVE = which
        try:
            run()  # warm
            best = time_call(run, repeat)
        finally:
            backends.ACTIVE = old
        print(f"backend {which:6s}: {best * 1e3:9.2f} ms")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--points", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not backends.HAS_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")
    bench_tape(args.batch, args.repeat)
    bench_geometry(args.points, args.repeat)


if __name__ == "__main__":
    main()
