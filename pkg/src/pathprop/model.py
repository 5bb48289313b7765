"""Classical Lagrangian models L(v, x) = m*v^2/2 - V(x) with polynomial V.

Scaled units hbar = m = 1 throughout; the mass is kept as a field because the
kernel prefactor depends on it.
"""

from dataclasses import dataclass

import numpy as np

HARMONIC_PERIOD = 2.0 * np.pi  # classical period of the unit-frequency oscillator


@dataclass(frozen=True)
class PotentialModel:
    """Polynomial potential: V(x) = sum(coefficients[k] * x**k)."""

    coefficients: tuple
    mass: float = 1.0
    label: str = "custom"

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            coeffs = (0.0,)
        object.__setattr__(self, "coefficients", coeffs)

    def potential(self, x):
        acc = np.zeros_like(np.asarray(x, dtype=float))
        for c in self.coefficients[::-1]:
            acc = acc * x + c
        return acc

    def lagrangian(self, x, v):
        return 0.5 * self.mass * v * v - self.potential(x)


@dataclass(frozen=True)
class DoubleWellParams:
    """Quartic double well V(x) = strength * (x - well_position)^2 (x + well_position)^2."""

    strength: float
    well_position: float

    def __post_init__(self):
        if not self.strength > 0:
            raise ValueError(f"strength must be positive, got {self.strength}")
        if not self.well_position > 0:
            raise ValueError(f"well_position must be positive, got {self.well_position}")


def harmonic_model() -> PotentialModel:
    """Unit-frequency oscillator, V(x) = x^2/2; classical period 2*pi."""
    return PotentialModel(coefficients=(0.0, 0.0, 0.5), mass=1.0, label="harmonic")


def double_well_model(params: DoubleWellParams) -> PotentialModel:
    """Symmetric quartic double well with minima at +-well_position.

    V(x) = strength * (x^2 - well_position^2)^2; barrier height at the origin
    is strength * well_position^4.
    """
    a, w2 = params.strength, params.well_position ** 2
    return PotentialModel(
        coefficients=(a * w2 * w2, 0.0, -2.0 * a * w2, 0.0, a),
        mass=1.0,
        label="double_well",
    )


def free_model() -> PotentialModel:
    """V = 0; handy for unitarity sanity checks."""
    return PotentialModel(coefficients=(0.0,), mass=1.0, label="free")
