#!/usr/bin/env python3
"""Benchmark: compiled propagation kernel vs the pure-NumPy fallback.

Times the raw batched end-state kernel and a full eigenvalue-table build on
the reference problem (zero potential, Neumann-like angles, n <= 20, M = 2000).

Run:  python benchmarks/bench_kernels.py [--solver-m 2000] [--n-max 20]
"""

import argparse
import importlib
import os
import sys
import time

import numpy as np


def time_call(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernel(impl, m, batch):
    qg1 = np.zeros(m)
    qg2 = np.zeros(m)
    mus = np.linspace(0.0, 420.0, batch)
    return time_call(lambda: impl.propagate_end(qg1, qg2, np.pi / m, mus, 1.0, 0.0))


def bench_eigen(m, n_max):
    from sturmspec import Grid, OperatorSpec, Potential, RobinAngles
    from sturmspec.solver import eigenvalues
    op = OperatorSpec(Potential.zero(Grid.make(m)), RobinAngles(np.pi / 2, np.pi / 2))
    table = None

    def run():
        nonlocal table
        table = eigenvalues(op, n_max)

    best = time_call(run, repeats=2)
    err = np.abs(table.mus - np.arange(n_max + 1) ** 2.0).max()
    return best, err


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--solver-m", type=int, default=2000)
    parser.add_argument("--n-max", type=int, default=20)
    args = parser.parse_args()

    from sturmspec import _magnus_py
    impls = {"python": _magnus_py}
    try:
        from sturmspec import _magnus_c
        impls["compiled"] = _magnus_c
    except ImportError:
        print("compiled kernel not built; benchmarking the fallback only")

    batch = args.n_max + 1
    print(f"raw kernel: batched end-state, M={args.solver_m}, batch={batch}")
    times = {}
    for name, impl in impls.items():
        times[name] = bench_kernel(impl, args.solver_m, batch)
        print(f"  {name:>9}: {times[name] * 1e3:8.2f} ms")
    if len(times) == 2:
        print(f"  speedup: {times['python'] / times['compiled']:.1f}x")

    print(f"full eigenvalue table: n <= {args.n_max}, M={args.solver_m}")
    results = {}
    for name in impls:
        env = os.environ.copy()
        if name == "python":
            os.environ["STURMSPEC_FORCE_PYTHON"] = "1"
        else:
            os.environ.pop("STURMSPEC_FORCE_PYTHON", None)
        for mod in list(sys.modules):
            if mod.startswith("sturmspec"):
                del sys.modules[mod]
        importlib.invalidate_caches()
        import sturmspec
        assert sturmspec.backend_name() == name, sturmspec.backend_name()
        results[name] = bench_eigen(args.solver_m, args.n_max)
        print(f"  {name:>9}: {results[name][0]:8.3f} s   "
              f"(max eigenvalue error {results[name][1]:.2e})")
        os.environ.clear()
        os.environ.update(env)
    if len(results) == 2:
        print(f"  speedup: {results['python'][0] / results['compiled'][0]:.1f}x")


if __name__ == "__main__":
    main()
