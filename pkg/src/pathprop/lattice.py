"""Spatial grid and time-slicing plans shared by every pipeline."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpatialGrid:
    """Equidistant points on [x_min, x_max] with `intervals` subintervals."""

    x_min: float
    x_max: float
    intervals: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"inverted interval: [{self.x_min}, {self.x_max}]")
        if self.intervals < 2:
            raise ValueError(f"need at least 2 intervals, got {self.intervals}")

    @property
    def n_points(self) -> int:
        return self.intervals + 1

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.intervals

    def point(self, i: int) -> float:
        # convex combination per index: no summation drift, and for a
        # symmetric interval point(i) == -point(D-i) exactly
        d = self.intervals
        return ((d - i) * self.x_min + i * self.x_max) / d

    def points(self) -> np.ndarray:
        i = np.arange(self.n_points)
        d = self.intervals
        return ((d - i) * self.x_min + i * self.x_max) / d

    def __contains__(self, x: float) -> bool:
        return self.x_min <= x <= self.x_max


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class TimeSlicing:
    """One propagator block of duration `block_time` split into `slices`
    short-time factors, iterated for `blocks` trace/evolution steps.

    `slices` must be a power of two: blocks are built by repeated squaring.
    """

    block_time: float
    slices: int
    blocks: int = 1

    def __post_init__(self):
        if not self.block_time > 0:
            raise ValueError(f"block_time must be positive, got {self.block_time}")
        if not _is_power_of_two(self.slices):
            raise ValueError(f"slices must be a power of two, got {self.slices}")
        if self.blocks < 0:
            raise ValueError(f"blocks must be >= 0, got {self.blocks}")

    @property
    def dt(self) -> float:
        return self.block_time / self.slices
