import numpy as np
import pytest

from pathprop.lattice import SpatialGrid
from pathprop.model import DoubleWellParams, double_well_model, harmonic_model
from pathprop.propagator import build_kernel, compose
from pathprop.spectral import trace_ladder

# calibrated quartic well: lowest stencil levels (0.433000, 0.494093) on (-7,7,1400)
DW_STRENGTH = 0.021589
DW_POSITION = 2.475

HARMONIC_PERIOD = 2.0 * np.pi


@pytest.fixture(scope="session")
def harmonic():
    return harmonic_model()


@pytest.fixture(scope="session")
def dw():
    return double_well_model(DoubleWellParams(DW_STRENGTH, DW_POSITION))


@pytest.fixture(scope="session")
def paper_grid():
    return SpatialGrid(-7.0, 7.0, 600)


@pytest.fixture(scope="session")
def harmonic_block_600(harmonic, paper_grid):
    """Composed oscillator block G(T0/16), N = 4, on the display lattice."""
    kernel = build_kernel(harmonic, paper_grid, HARMONIC_PERIOD / 64)
    return compose(kernel, 4)


@pytest.fixture(scope="session")
def harmonic_trace_300(harmonic):
    """Renormalized oscillator trace ladder, T = pi/7, N_T = 1023, D = 300."""
    grid = SpatialGrid(-7.0, 7.0, 300)
    block = compose(build_kernel(harmonic, grid, np.pi / 28), 4)
    return trace_ladder(block, 1023, renormalize_each=True)


@pytest.fixture(scope="session")
def harmonic_block_600_t7(harmonic, paper_grid):
    return compose(build_kernel(harmonic, paper_grid, np.pi / 28), 4)


@pytest.fixture(scope="session")
def harmonic_trace_600(harmonic_block_600_t7):
    return trace_ladder(harmonic_block_600_t7, 1023, renormalize_each=True)


@pytest.fixture(scope="session")
def harmonic_trace_600_raw(harmonic_block_600_t7):
    # no per-step rescaling: the envelope decays smoothly and the comb stays
    # free of modulation sidebands
    return trace_ladder(harmonic_block_600_t7, 1023, renormalize_each=False)


@pytest.fixture(scope="session")
def coherent_run(harmonic):
    """One full period of the alpha=2 packet on a fine stable lattice.

    16 applications of G(T0/16) built from 16 slices each; fine enough that
    the frequency renormalization of the midpoint rule stays below 1e-6 at
    the period mark.
    """
    from pathprop.dynamics import (evolve_and_record, gaussian_state,
                                   hamiltonian_observable, kinetic_observable,
                                   position_observable, potential_observable)

    grid = SpatialGrid(-7.0, 7.0, 2240)
    block = compose(build_kernel(harmonic, grid, HARMONIC_PERIOD / (16 * 16)), 16)
    psi = gaussian_state(grid, 2.0, 1.0)
    observables = [position_observable(grid),
                   kinetic_observable(grid),
                   potential_observable(harmonic, grid),
                   hamiltonian_observable(harmonic, grid)]
    record = evolve_and_record(block, psi, 16, observables, snapshot_stride=8)
    return grid, psi, record


# ---------------------------------------------------------------------------
# acceptance reporting: one pass/fail line per criterion at session end

ACCEPTANCE_RESULTS = {}


def record_criterion(number, description, passed, detail, expected_fail=False):
    ACCEPTANCE_RESULTS[number] = (description, passed, detail, expected_fail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        description, passed, detail, expected_fail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else ("FAIL (expected, see notes)" if expected_fail else "FAIL")
        terminalreporter.write_line(f"criterion {number}: {status} - {description} [{detail}]")
