"""Independent reference solutions used for validation and the norm check.

These deliberately avoid the kernel-composition machinery: the oscillator
propagator comes from its closed form, eigenvalues from dense diagonalization
of the three-point finite-difference Hamiltonian.
"""

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .lattice import SpatialGrid
from .model import PotentialModel
from .propagator import PropagatorMatrix


def harmonic_kernel(grid: SpatialGrid, t: float, mass: float = 1.0,
                    omega: float = 1.0) -> PropagatorMatrix:
    """Closed-form oscillator propagator sampled on the lattice.

    <x_b|U(t)|x_a> = sqrt(m*w / (2*pi*i*sin(w*t)))
                     * exp(i*m*w*((x_a^2+x_b^2)*cos(w*t) - 2*x_a*x_b) / (2*sin(w*t)))

    Valid away from t = k*pi/w where the kernel degenerates to a delta.
    """
    s = np.sin(omega * t)
    if abs(s) < 1e-12:
        raise ValueError(f"oscillator kernel is singular at t = {t}")
    x = grid.points()
    pref = np.sqrt(mass * omega / (2j * np.pi * s))
    c = np.cos(omega * t)
    phase = mass * omega * ((x[:, None] ** 2 + x[None, :] ** 2) * c
                            - 2.0 * x[:, None] * x[None, :]) / (2.0 * s)
    return PropagatorMatrix(entries=pref * np.exp(1j * phase), elapsed=t, grid=grid)


def free_kernel(grid: SpatialGrid, t: float, mass: float = 1.0) -> PropagatorMatrix:
    """Exact free-particle propagator sampled on the lattice."""
    if t == 0:
        raise ValueError("free kernel requires t != 0")
    x = grid.points()
    pref = np.sqrt(mass / (2j * np.pi * t))
    phase = mass * (x[:, None] - x[None, :]) ** 2 / (2.0 * t)
    return PropagatorMatrix(entries=pref * np.exp(1j * phase), elapsed=t, grid=grid)


def stencil_eigenvalues(model: PotentialModel, grid: SpatialGrid, count: int) -> np.ndarray:
    """Lowest eigenvalues of the three-point finite-difference Hamiltonian.

    H psi_i = -(psi_{i+1} - 2 psi_i + psi_{i-1}) / (2 m dx^2) + V(x_i) psi_i
    with hard walls at the grid ends.
    """
    x = grid.points()
    dx = grid.dx
    diag = 1.0 / (model.mass * dx * dx) + model.potential(x)
    off = np.full(grid.intervals, -1.0 / (2.0 * model.mass * dx * dx))
    vals = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))[0]
    return vals


def stencil_eigenpairs(model: PotentialModel, grid: SpatialGrid, count: int):
    """Like stencil_eigenvalues but also returns grid-normalized eigenvectors."""
    x = grid.points()
    dx = grid.dx
    diag = 1.0 / (model.mass * dx * dx) + model.potential(x)
    off = np.full(grid.intervals, -1.0 / (2.0 * model.mass * dx * dx))
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))
    return vals, vecs / np.sqrt(dx)
