"""Benchmark the compiled kernel extension against the pure-Python twin.

Usage: python benchmarks/bench_kernels.py [--steps N]
"""

import argparse
import time

import numpy as np

from sqk3 import _kernels_py as pure

try:
    from sqk3 import _kernels as compiled
except ImportError:
    compiled = None


def time_call(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(mod, steps):
    x0 = np.array([1.2, 0.4, 2.2])
    v0 = np.array([0.1, 0.5, 0.3])
    rows = {}
    rows["christoffels x1000"] = time_call(
        lambda: [mod.christoffels(0, 1.0, 1.2 + 1e-4 * k, 0.4, 2.2)
                 for k in range(1000)])
    rows[f"charged RK4 {steps} steps"] = time_call(
        lambda: mod.integrate_lorentz(0, 1.0, x0, v0, 0.25, 0.0, 0.0, 2.0,
                                      1e-3, steps, 0.01, 3.13))
    rows[f"geodesic RK4 {steps} steps"] = time_call(
        lambda: mod.integrate_lorentz(1, 1.0, x0, v0, 0.0, 0.0, 0.0, 0.0,
                                      1e-3, steps, 0.01, 50.0))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=10000)
    args = ap.parse_args()

    pure_rows = bench(pure, args.steps)
    comp_rows = bench(compiled, args.steps) if compiled else None

    width = max(len(k) for k in pure_rows) + 2
    header = f"{'kernel':<{width}}{'python':>12}"
    if comp_rows:
        header += f"{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for key, t_pure in pure_rows.items():
        line = f"{key:<{width}}{t_pure * 1e3:>10.2f}ms"
        if comp_rows:
            t_comp = comp_rows[key]
            line += f"{t_comp * 1e3:>10.2f}ms{t_pure / t_comp:>9.1f}x"
        print(line)
    if compiled is None:
        print("\ncompiled extension not built; showing pure-Python timings only")
    else:
        # agreement spot check on a shared trajectory
        args_t = (0, 1.0, np.array([1.2, 0.4, 2.2]), np.array([0.1, 0.5, 0.3]),
                  0.25, 0.0, 0.0, 2.0, 1e-3, 1000, 0.01, 3.13)
        xa, _, _ = pure.integrate_lorentz(*args_t)
        xb, _, _ = compiled.integrate_lorentz(*args_t)
        print(f"\nbackend agreement (1000 steps): "
              f"max position delta = {np.max(np.abs(xa - xb)):.2e}")


if __name__ == "__main__":
    main()
