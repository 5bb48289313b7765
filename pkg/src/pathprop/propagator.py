"""Short-time kernel construction, composition to finite times, and the
unitarity diagnostic with its global renormalization.

The one-slice kernel on grid points (x_i) is

    K[i, j] = C * exp(i*dt*L((x_i+x_j)/2, (x_j-x_i)/dt)),   C = sqrt(m/(2*pi*i*dt))

with the principal branch of the square root, so C carries the phase
exp(-i*pi/4) for dt > 0.  All entries share the modulus |C| for real V.
Finite-time blocks are dx^(N-1) * K^N, evaluated by repeated squaring of
(dx*K) followed by one division by dx, which keeps intermediates O(1):
log2(N) matrix products in total.
"""

from dataclasses import dataclass

import numpy as np

from . import _core
from .lattice import SpatialGrid
from .model import PotentialModel


@dataclass(frozen=True)
class KernelMatrix:
    entries: np.ndarray  # (D+1, D+1) complex, constant modulus |prefactor|
    dt: float
    grid: SpatialGrid
    prefactor: complex


@dataclass(frozen=True)
class PropagatorMatrix:
    entries: np.ndarray  # approximates <x_i|U(elapsed)|x_j> on the grid
    elapsed: float
    grid: SpatialGrid


@dataclass(frozen=True)
class NormProfile:
    """Total transition probability out of each starting point.

    values[k] = Re sum_{i,j} dx^2 * conj(G[i,j]) * G[i,k]; exactly 1 for the
    continuum unitary kernel, so deviations measure discretization and
    boundary-truncation error.
    """

    values: np.ndarray
    positions: np.ndarray
    elapsed: float


def build_kernel(model: PotentialModel, grid: SpatialGrid, dt: float) -> KernelMatrix:
    """One-slice kernel matrix for a time step dt.

    dt may be negative, which yields the time-reversed kernel (the conjugate
    transpose of the forward one); dt = 0 is rejected.
    """
    if dt == 0 or not np.isfinite(dt):
        raise ValueError(f"slice duration must be finite and nonzero, got {dt}")
    prefactor = complex(np.sqrt(model.mass / (2j * np.pi * dt)))
    coeffs = np.asarray(model.coefficients, dtype=np.float64)
    entries = _core.kernel_matrix(grid.points(), float(dt), model.mass, coeffs, prefactor)
    return KernelMatrix(entries=entries, dt=dt, grid=grid, prefactor=prefactor)


def compose(kernel: KernelMatrix, n_slices: int) -> PropagatorMatrix:
    """dx^(N-1) * K^N by repeated squaring of dx*K; N must be a power of two."""
    n = n_slices
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"slice count must be a power of two, got {n_slices}")
    elapsed = n * kernel.dt
    if n == 1:
        return PropagatorMatrix(kernel.entries.copy(), elapsed, kernel.grid)
    dx = kernel.grid.dx
    work = dx * kernel.entries
    while n > 1:
        work = _core.matmul_scaled(work, work, 1.0)
        n //= 2
    work /= dx
    return PropagatorMatrix(work, elapsed, kernel.grid)


def extend(block: PropagatorMatrix, prev: PropagatorMatrix) -> PropagatorMatrix:
    """Composition law G(t + T) = G(T) G(t) dx."""
    if block.grid != prev.grid:
        raise ValueError("propagators live on different grids")
    dx = block.grid.dx
    entries = _core.matmul_scaled(block.entries, prev.entries, dx)
    return PropagatorMatrix(entries, block.elapsed + prev.elapsed, block.grid)


def norm_profile(prop: PropagatorMatrix) -> NormProfile:
    """Unitarity profile over starting points (see NormProfile)."""
    dx = prop.grid.dx
    rowsums = prop.entries.sum(axis=1)
    values = (dx * dx) * np.real(np.conj(rowsums) @ prop.entries)
    return NormProfile(values=values, positions=prop.grid.points(), elapsed=prop.elapsed)


def mean_profile_value(prop: PropagatorMatrix) -> float:
    """Mean of the unitarity profile; equals dx^2 * ||rowsums||^2 / (D+1)."""
    dx = prop.grid.dx
    rowsums = prop.entries.sum(axis=1)
    return float(dx * dx * np.real(rowsums @ rowsums.conj()) / prop.entries.shape[0])


def renormalize(prop: PropagatorMatrix) -> PropagatorMatrix:
    """Rescale by the single real scalar 1/sqrt(mean profile value).

    Compensates the slow amplitude drift of long products; phases untouched.
    """
    mean = mean_profile_value(prop)
    if not mean > 0:
        raise ValueError("cannot renormalize a degenerate (all-zero) propagator")
    return PropagatorMatrix(prop.entries / np.sqrt(mean), prop.elapsed, prop.grid)


def save_propagator(prop: PropagatorMatrix, path) -> None:
    """Binary dump: little-endian header (D int64, elapsed/x_min/x_max float64)
    followed by row-major interleaved re/im float64 entries."""
    with open(path, "wb") as fh:
        fh.write(np.int64(prop.grid.intervals).astype("<i8").tobytes())
        header = np.array([prop.elapsed, prop.grid.x_min, prop.grid.x_max], dtype="<f8")
        fh.write(header.tobytes())
        fh.write(np.ascontiguousarray(prop.entries, dtype="<c16").tobytes())


def load_propagator(path) -> PropagatorMatrix:
    with open(path, "rb") as fh:
        raw = fh.read()
    d = int(np.frombuffer(raw[:8], dtype="<i8")[0])
    elapsed, x_min, x_max = np.frombuffer(raw[8:32], dtype="<f8")
    n = d + 1
    entries = np.frombuffer(raw[32:], dtype="<c16").reshape(n, n).copy()
    grid = SpatialGrid(float(x_min), float(x_max), d)
    return PropagatorMatrix(entries=entries, elapsed=float(elapsed), grid=grid)
