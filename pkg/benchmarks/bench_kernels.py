#!/usr/bin/env python3
"""Benchmark the compiled edge kernels against the pure-numpy fallback.

Times the raw per-edge batch kernels at several sizes and one end-to-end
flow, for every available backend.  Run from the repository root:

    python benchmarks/bench_kernels.py [--sizes 256,4096,65536] [--repeat 5]
"""

import argparse
import time

import numpy as np

from circlepatterns import PatternType, kernels, ricci_flow, torus_grid
from circlepatterns.solve import FlowOptions


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(sizes, repeat):
    rng = np.random.default_rng(7)
    rows = []
    for n in sizes:
        theta = rng.uniform(0.2, 3.0, n)
        u1 = -rng.uniform(0.1, 5.0, n)
        u2 = -rng.uniform(0.1, 5.0, n)
        for name in kernels.available_backends():
            kernels.set_backend(name)
            for label, fn in [
                ("angles_110", lambda: kernels.angles_110(theta, u1, u2)),
                ("full_110", lambda: kernels.full_110(theta, u1, u2)),
                ("full_00d", lambda: kernels.full_00d(0, theta, u1, u2)),
            ]:
                fn()  # warm up
                rows.append((label, n, name, _time(fn, repeat)))
    return rows


def bench_flow(repeat):
    pattern = torus_grid(8, 8)
    target = np.full(pattern.face_count, 2 * np.pi)
    opts = FlowOptions(dt=0.1, t_max=30.0, tol_residual=1e-8, sample_every=10)
    rows = []
    for name in kernels.available_backends():
        kernels.set_backend(name)

        def run():
            ricci_flow(
                pattern,
                PatternType(1, 0),
                1.0,
                target,
                u0=np.full(pattern.face_count, -0.5),
                opts=opts,
            )

        run()
        rows.append(("ricci_flow 8x8 (1,1,0)", pattern.edge_count, name, _time(run, repeat)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="256,4096,65536")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rows = bench_kernels(sizes, args.repeat) + bench_flow(max(1, args.repeat // 2))
    print(f"{'benchmark':28s} {'n':>8s} {'backend':>9s} {'best [ms]':>10s}")
    by_key = {}
    for label, n, name, seconds in rows:
        by_key.setdefault((label, n), {})[name] = seconds
        print(f"{label:28s} {n:8d} {name:>9s} {1e3 * seconds:10.3f}")
    print()
    for (label, n), times in sorted(by_key.items()):
        if "compiled" in times and "python" in times:
            print(
                f"speedup {label} n={n}: "
                f"{times['python'] / times['compiled']:.2f}x"
            )


if __name__ == "__main__":
    main()
