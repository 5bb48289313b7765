"""Real-time path-integral propagator engine.

Builds the short-time kernel of a one-dimensional Lagrangian on a spatial
lattice, composes it into finite-time propagators by repeated matrix
squaring, and uses the result to evolve wavepackets, extract energy spectra
from the propagator trace, and measure double-well tunnelling times.

Submodules are imported lazily so the command-line entry point can pin the
BLAS thread pool before numpy loads.
"""

__version__ = "0.1.0"

_SUBMODULES = ("lattice", "model", "propagator", "dynamics", "spectral",
               "tunneling", "reference", "cli")

__all__ = list(_SUBMODULES) + ["__version__", "backend_name"]


def backend_name() -> str:
    """Active numerical backend: 'compiled' or 'pure'."""
    from . import _core

    return _core.backend_name()


def __getattr__(name):
    if name in _SUBMODULES:
        import importlib

        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
