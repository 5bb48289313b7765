"""Propagator-trace ladder, its discrete Fourier transform and peak detection.

The trace of the time evolution operator decomposes over energy eigenstates
as sum_n exp(-i*E_n*t); sampling it on the ladder t_i = (i+1)*T and Fourier
transforming therefore produces peaks at the eigenvalues.  The transform is
the plain FFT of the finite sample sequence (rectangular window, no pole
handling): energies alias modulo 2*pi/T and the bin width is
2*pi/((N_T+1)*T), so T alone fixes the energy range and the ladder length
fixes the resolution.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _core
from .propagator import PropagatorMatrix, renormalize


@dataclass(frozen=True)
class TraceSeries:
    """dx-weighted propagator traces on t_i = (i+1) * block_time, i = 0..N_T."""

    values: np.ndarray  # complex, length N_T + 1
    block_time: float

    def times(self) -> np.ndarray:
        return (np.arange(len(self.values)) + 1) * self.block_time


@dataclass(frozen=True)
class EnergySpectrum:
    energies: np.ndarray   # ascending bins from 0, spacing = resolution
    magnitudes: np.ndarray
    block_time: float

    @property
    def resolution(self) -> float:
        return 2.0 * np.pi / (len(self.energies) * self.block_time)

    @property
    def energy_range(self) -> float:
        """Energies are only resolved modulo this aliasing cap, 2*pi/T."""
        return 2.0 * np.pi / self.block_time


class Peak(NamedTuple):
    energy: float
    magnitude: float


@dataclass(frozen=True)
class PeakList:
    peaks: tuple  # of Peak, energies ascending

    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.peaks])


def trace_ladder(block: PropagatorMatrix, n_blocks: int,
                 renormalize_each: bool = True) -> TraceSeries:
    """Iterate G(t_i) = G(T) G(t_{i-1}) dx, recording dx * Tr G(t_i).

    With `renormalize_each` the block is rescaled once up front and the
    running product is rescaled by the global unitarity scalar after every
    extension, which keeps the trace magnitude bounded over long ladders.
    Raises FloatingPointError if the product blows up.
    """
    if n_blocks < 1:
        raise ValueError("need at least one ladder step")
    entries = block.entries
    if renormalize_each:
        entries = renormalize(block).entries
    traces, _ = _core.run_ladder(entries, n_blocks, block.grid.dx, renormalize_each)
    return TraceSeries(values=traces, block_time=block.elapsed)


def spectrum_from_trace(trace: TraceSeries) -> EnergySpectrum:
    """FFT of the trace with the convention that samples exp(-i*E*t_i)
    produce a peak at bin energy +E.  Magnitudes are unnormalized, so
    sum(magnitudes^2) = (N_T+1) * sum(|values|^2)."""
    values = np.asarray(trace.values)
    if len(values) < 2:
        raise ValueError("need at least two trace samples")
    m = len(values)
    mags = np.abs(np.fft.ifft(values)) * m
    de = 2.0 * np.pi / (m * trace.block_time)
    return EnergySpectrum(energies=np.arange(m) * de, magnitudes=mags,
                          block_time=trace.block_time)


def find_peaks(spectrum: EnergySpectrum, threshold_fraction: float = 0.1) -> PeakList:
    """Strict local maxima above threshold_fraction * max magnitude, each
    refined by three-point parabolic interpolation on the log magnitude."""
    if not 0.0 < threshold_fraction < 1.0:
        raise ValueError(f"threshold_fraction must be in (0, 1), got {threshold_fraction}")
    mags = spectrum.magnitudes
    if len(mags) < 3 or not mags.max() > 0:
        raise ValueError("spectrum is empty")
    de = spectrum.resolution
    floor = threshold_fraction * mags.max()
    found = []
    for k in range(1, len(mags) - 1):
        if mags[k] > floor and mags[k] > mags[k - 1] and mags[k] > mags[k + 1]:
            y0, y1, y2 = np.log(mags[k - 1]), np.log(mags[k]), np.log(mags[k + 1])
            denom = y0 - 2.0 * y1 + y2
            shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
            height = float(np.exp(y1 - 0.25 * (y0 - y2) * shift))
            found.append(Peak(energy=(k + shift) * de, magnitude=height))
    return PeakList(peaks=tuple(found))


def synthetic_trace(frequencies, block_time: float, n_blocks: int,
                    weights=None) -> TraceSeries:
    """Trace a fictitious system with the given levels: sum_n w_n exp(-i E_n t_i).

    Test-harness input for the transform and the peak finder.
    """
    t = (np.arange(n_blocks + 1) + 1) * block_time
    freqs = np.atleast_1d(np.asarray(frequencies, dtype=float))
    if weights is None:
        weights = np.ones_like(freqs)
    values = (np.asarray(weights)[:, None] * np.exp(-1j * freqs[:, None] * t[None, :])).sum(axis=0)
    return TraceSeries(values=values, block_time=block_time)
