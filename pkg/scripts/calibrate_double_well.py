#!/usr/bin/env python3
"""Reconstruct the shipped double-well parameters.

The quartic strength and well position shipped in configs/double_well_*.json
are not published values: they are calibrated so that the lowest symmetric
and antisymmetric levels of the finite-difference Hamiltonian land on the
target pair (0.433, 0.494).  This script reruns that calibration: for each
trial well position it bisects the strength until E_S = 0.433, then picks
the position whose resulting E_A is closest to 0.494.

    python3 scripts/calibrate_double_well.py
"""

import numpy as np

from pathprop.lattice import SpatialGrid
from pathprop.model import DoubleWellParams, double_well_model
from pathprop.reference import stencil_eigenvalues

TARGET_S, TARGET_A = 0.433, 0.494
GRID = SpatialGrid(-7.0, 7.0, 1400)


def levels(strength, position, count=2):
    model = double_well_model(DoubleWellParams(strength, position))
    return stencil_eigenvalues(model, GRID, count)


def strength_for_ground_level(position):
    lo, hi = 1e-3, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if levels(mid, position)[0] < TARGET_S:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def main():
    print(f"target levels: ({TARGET_S}, {TARGET_A})\n")
    print(f"{'position':>9} {'strength':>10} {'E_S':>9} {'E_A':>9}")
    best = None
    for position in np.arange(2.40, 2.581, 0.005):
        strength = strength_for_ground_level(position)
        e = levels(strength, position)
        print(f"{position:>9.3f} {strength:>10.6f} {e[0]:>9.6f} {e[1]:>9.6f}")
        if best is None or abs(e[1] - TARGET_A) < abs(best[2] - TARGET_A):
            best = (position, strength, e[1])
    position, strength, e_a = best
    print(f"\ncalibrated pair: strength = {strength:.6f}, position = {position}")
    print(f"levels ({TARGET_S:.6f}, {e_a:.6f}); barrier {strength * position ** 4:.4f}")
    print("shipped configs use strength = 0.021589, position = 2.475")


if __name__ == "__main__":
    main()
