#!/usr/bin/env python3
"""Benchmark the compiled scan core against the pure-NumPy fallback.

The package selects one backend at import time; this script drives both
implementations side by side through the low-level scan API, then times a
full equioscillation solve per backend in subprocesses (so each run really
imports with the backend it claims to measure).

Usage::

    python3 benchmarks/compare_backends.py [--repeat N] [--grid-points N]
"""

from __future__ import annotations

import argparse
import os
import statistics
import subprocess
import sys
import time

import numpy as np

import sumtranslates as st
from sumtranslates import sumscan

SOLVE_SNIPPET = """
import time
import sumtranslates as st
p = st.Problem(
    kernels=(st.log_kernel(), st.log_kernel(1.5), st.log_linear_kernel(1.0, 0.1)),
    field=st.neg_square_field(),
)
t0 = time.perf_counter()
res = st.equioscillate(p)
elapsed = time.perf_counter() - t0
assert res.converged
print(f"{st.BACKEND} {elapsed:.6f}")
"""


def cases() -> list[tuple[str, st.Problem, np.ndarray]]:
    return [
        (
            "1 log kernel, -|t| field",
            st.Problem(kernels=(st.log_kernel(),), field=st.neg_abs_field()),
            np.array([0.5]),
        ),
        (
            "3 mixed kernels, gaussian field",
            st.Problem(
                kernels=(
                    st.log_kernel(),
                    st.log_kernel(1.5),
                    st.log_linear_kernel(1.0, 0.1),
                ),
                field=st.neg_square_field(),
            ),
            np.array([-0.8, 0.1, 1.2]),
        ),
        (
            "2 log kernels, table field",
            st.Problem(
                kernels=(st.log_kernel(), st.log_kernel(0.7)),
                field=st.table_field(
                    [(-3.0, -4.0), (-1.0, -0.5), (0.0, 0.0), (1.0, -0.5), (3.0, -4.0)]
                ),
            ),
            np.array([-0.4, 0.9]),
        ),
    ]


def best_of(fn, repeat: int) -> tuple[float, float]:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def bench_scans(repeat: int, grid_points: int) -> None:
    print(f"scan-level timings (best of {repeat}, seconds)")
    header = f"{'case':<34} {'op':<14} {'pure':>10} {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, problem, y in cases():
        enc = sumscan.encode(problem.kernels, problem.field)
        rows = []
        ts = np.linspace(-6.0, 6.0, grid_points)
        for op, runner in [
            (
                f"grid({grid_points // 1000}k)",
                lambda impl: sumscan.grid_values(
                    sumscan.make_handle(enc, impl=impl), y, ts, impl=impl
                ),
            ),
            (
                "interval_peak",
                lambda impl: sumscan.interval_peak(
                    sumscan.make_handle(enc, impl=impl),
                    y,
                    float(y[-1]),
                    6.0,
                    2048,
                    1e-12,
                    impl=impl,
                ),
            ),
        ]:
            impls = sumscan.implementations()
            pure_best, _ = best_of(lambda: runner(impls["pure"]), repeat)
            comp_best, _ = best_of(lambda: runner(impls["compiled"]), repeat)
            rows.append((op, pure_best, comp_best))
        for op, pure_best, comp_best in rows:
            speed = pure_best / comp_best if comp_best > 0 else float("inf")
            print(
                f"{label:<34} {op:<14} {pure_best:>10.6f} {comp_best:>10.6f} "
                f"{speed:>7.2f}x"
            )
    print()


def bench_solve() -> None:
    print("full equioscillation solve, one subprocess per backend")
    for env_extra, wanted in [({"SUMTRANSLATES_PURE": "1"}, "pure"), ({}, "compiled")]:
        env = dict(os.environ)
        env.pop("SUMTRANSLATES_PURE", None)
        env.update(env_extra)
        out = subprocess.run(
            [sys.executable, "-c", SOLVE_SNIPPET],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        ).stdout.strip()
        backend, elapsed = out.split()
        assert backend == wanted, f"expected backend {wanted}, got {backend}"
        print(f"  {backend:<9} {float(elapsed):.4f} s")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    parser.add_argument(
        "--grid-points", type=int, default=400_001, help="grid size for value scans"
    )
    args = parser.parse_args()

    impls = sumscan.implementations()
    if impls["pure"] is impls["compiled"]:
        print("warning: compiled extension unavailable; comparing pure to itself")
    bench_scans(args.repeat, args.grid_points)
    bench_solve()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
