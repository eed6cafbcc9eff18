#!/usr/bin/env python3
"""Benchmark the compiled kernel-sum core against the numpy fallback.

Times the three hot loops (kde over a grid, leave-one-out values, 2-D kde)
at a few sample sizes and prints a speedup table.  Run from the repository
root after building the extension:

    python benchmarks/benchmark_backends.py
"""

from __future__ import annotations

import time

import numpy as np

import fitcoef._core_py as core_py

try:
    import fitcoef._core as core_c
except ImportError:
    core_c = None


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    rng = np.random.default_rng(0)
    grid = np.linspace(-5.0, 5.0, 2001)
    print(f"{'case':<28} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for n in (400, 2000, 8000):
        data = np.ascontiguousarray(rng.standard_normal(n))
        data2 = np.ascontiguousarray(rng.standard_normal((n, 2)))
        h = 0.9 * n ** (-0.2)
        cases = [
            (f"kde_1d n={n} m=2001", lambda b: b.kde_1d(data, grid, h, 0)),
            (f"loo_1d n={n}", lambda b: b.loo_1d(data, h, 0)),
            (f"kde_2d n={n} m=2001", lambda b: b.kde_2d(data2, grid, grid, h, 0)),
        ]
        for label, call in cases:
            t_py = best_of(lambda: call(core_py))
            if core_c is None:
                print(f"{label:<28} {t_py * 1e3:>8.2f}ms {'n/a':>10} {'-':>8}")
                continue
            t_c = best_of(lambda: call(core_c))
            np.testing.assert_allclose(call(core_py), call(core_c), rtol=1e-12)
            print(f"{label:<28} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms {t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
