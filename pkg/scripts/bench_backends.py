#!/usr/bin/env python3
"""Benchmark the compiled core against the pure-numpy fallback.

Times the three hot kernels (one-slice matrix fill, block composition by
repeated squaring, and the sequential trace ladder) on identical inputs.

    python3 scripts/bench_backends.py [--d 600] [--ladder 64] [--repeats 3]

Both paths call the same BLAS for the matrix products, so the ladder mostly
measures loop and allocation overhead; the kernel fill is where the compiled
loop wins.
"""

import argparse
import time

import numpy as np


def best_of(repeats, fn, *args):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def compose_with(impl, kernel, n_slices, dx):
    work = dx * kernel
    n = n_slices
    while n > 1:
        work = impl.matmul_scaled(work, work, 1.0)
        n //= 2
    return work / dx


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=600, help="grid intervals")
    parser.add_argument("--ladder", type=int, default=64, help="trace ladder steps")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    from pathprop._core import _pure

    try:
        from pathprop._core import _speedups
    except ImportError:
        _speedups = None
        print("compiled core not available; timing the pure backend only\n")

    from pathprop.lattice import SpatialGrid
    from pathprop.model import harmonic_model

    grid = SpatialGrid(-7.0, 7.0, args.d)
    model = harmonic_model()
    dt = np.pi / 28
    pref = complex(np.sqrt(model.mass / (2j * np.pi * dt)))
    coeffs = np.asarray(model.coefficients)
    x = grid.points()

    backends = [("pure", _pure)] + ([("compiled", _speedups)] if _speedups else [])
    rows = []

    for label, impl in backends:
        t_fill, kernel = best_of(args.repeats, impl.kernel_matrix, x, dt, 1.0, coeffs, pref)
        t_comp, block = best_of(args.repeats, compose_with, impl, kernel, 4, grid.dx)
        t_ladd, _ = best_of(args.repeats, impl.run_ladder, block, args.ladder, grid.dx, True)
        rows.append((label, t_fill, t_comp, t_ladd))

    print(f"D = {args.d} ({args.d + 1} points), N = 4, ladder = {args.ladder} steps, "
          f"best of {args.repeats}\n")
    print(f"{'backend':<10} {'kernel fill':>12} {'compose':>12} {'trace ladder':>13}")
    for label, t_fill, t_comp, t_ladd in rows:
        print(f"{label:<10} {t_fill * 1e3:>10.1f} ms {t_comp * 1e3:>10.1f} ms {t_ladd * 1e3:>11.1f} ms")
    if len(rows) == 2:
        print(f"{'speedup':<10} {rows[0][1] / rows[1][1]:>11.2f}x {rows[0][2] / rows[1][2]:>11.2f}x "
              f"{rows[0][3] / rows[1][3]:>12.2f}x")

    if _speedups is not None:
        a = _pure.kernel_matrix(x, dt, 1.0, coeffs, pref)
        b = _speedups.kernel_matrix(x, dt, 1.0, coeffs, pref)
        print(f"\nbackend agreement: max entry diff {np.abs(a - b).max():.2e}")


if __name__ == "__main__":
    main()
