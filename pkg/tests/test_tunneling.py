import numpy as np
import pytest

from pathprop.dynamics import (ExpectationSeries, apply_propagator,
                               expectation, gaussian_state,
                               hamiltonian_observable)
from pathprop.lattice import SpatialGrid
from pathprop.model import DoubleWellParams, double_well_model
from pathprop.propagator import build_kernel, compose
from pathprop.reference import stencil_eigenvalues
from pathprop.tunneling import (TrialParams, TunnelEventNotFound,
                                localized_state, side_probability,
                                trial_states, tunnel_time_dynamic,
                                tunnel_time_splitting, variational_fit)
from tests.conftest import DW_POSITION, DW_STRENGTH


@pytest.fixture(scope="module")
def grid300():
    return SpatialGrid(-7.0, 7.0, 300)


@pytest.fixture(scope="module")
def fits300(dw, grid300):
    return (variational_fit(dw, grid300, "S"), variational_fit(dw, grid300, "A"))


def test_trial_states_parity(grid300):
    sym, asym = trial_states(grid300, TrialParams(1.0, 2.0))
    assert np.array_equal(sym.amplitudes, sym.amplitudes[::-1])
    assert np.array_equal(asym.amplitudes, -asym.amplitudes[::-1])
    assert abs(sym.norm() - 1.0) < 1e-12
    assert abs(asym.norm() - 1.0) < 1e-12


def test_trial_states_orthogonal(grid300):
    sym, asym = trial_states(grid300, TrialParams(0.9, 1.8))
    overlap = grid300.dx * np.vdot(sym.amplitudes, asym.amplitudes)
    assert abs(overlap) < 1e-12


def test_far_separated_wells_give_single_gaussians(grid300):
    params = TrialParams(0.5, 3.0)
    sym, asym = trial_states(grid300, params)
    right = localized_state(sym, asym)
    reference = gaussian_state(grid300, 1.0 / params.width ** 2, params.displacement)
    overlap = grid300.dx * np.vdot(reference.amplitudes, right.amplitudes)
    assert abs(overlap) > 1.0 - 1e-10


def test_trial_validation(grid300):
    with pytest.raises(ValueError):
        TrialParams(0.0, 1.0)
    with pytest.raises(ValueError):
        TrialParams(1.0, -1.0)
    with pytest.raises(ValueError):
        trial_states(grid300, TrialParams(1.0, 9.0))


def test_variational_recovers_harmonic_ground_state(harmonic, grid300):
    fit = variational_fit(harmonic, grid300, "S", fixed_displacement=1e-9)
    assert abs(fit.params.width - 1.0) < 5e-3
    assert abs(fit.energy - 0.5) < 1e-3
    assert fit.converged


def test_variational_energies(dw, grid300, fits300):
    fit_s, fit_a = fits300
    assert fit_s.converged and fit_a.converged
    assert fit_a.energy > fit_s.energy
    # the doublet sits below the barrier top
    barrier = DW_STRENGTH * DW_POSITION ** 4
    assert fit_a.energy < barrier


def test_rayleigh_ritz_bound(dw, grid300, fits300):
    exact = stencil_eigenvalues(dw, grid300, 2)
    fit_s, fit_a = fits300
    assert fit_s.energy >= exact[0]
    assert fit_a.energy >= exact[1]
    # any trial state of fixed parity bounds its sector from above
    ham = hamiltonian_observable(dw, grid300)
    rng = np.random.default_rng(3)
    for _ in range(5):
        params = TrialParams(rng.uniform(0.4, 2.5), rng.uniform(0.5, 3.2))
        sym, asym = trial_states(grid300, params)
        assert expectation(sym, ham) >= exact[0]
        assert expectation(asym, ham) >= exact[1]


def test_variational_parity_input():
    with pytest.raises(ValueError):
        variational_fit(double_well_model(DoubleWellParams(0.02, 2.0)),
                        SpatialGrid(-6.0, 6.0, 100), "X")


def test_localized_state_concentrates(dw, grid300, fits300):
    fit_s, fit_a = fits300
    sym, _ = trial_states(grid300, fit_s.params)
    _, asym = trial_states(grid300, fit_a.params)
    right = localized_state(sym, asym)
    assert side_probability(right, +1) > 0.95
    left = localized_state(sym, asym, side=-1)
    assert side_probability(left, -1) > 0.95
    assert np.allclose(left.density(), right.density()[::-1], atol=1e-12)


def test_localized_state_energy_is_doublet_mean(dw, grid300, fits300):
    fit_s, fit_a = fits300
    sym, _ = trial_states(grid300, fit_s.params)
    _, asym = trial_states(grid300, fit_a.params)
    psi = localized_state(sym, asym)
    h = expectation(psi, hamiltonian_observable(dw, grid300))
    assert abs(h - 0.5 * (fit_s.energy + fit_a.energy)) < 1e-10


def test_parity_conserved_under_propagation(dw, grid300):
    # even potential on a symmetric grid: opposite-parity admixture stays tiny
    block = compose(build_kernel(dw, grid300, np.pi / 8), 1)
    sym, _ = trial_states(grid300, TrialParams(1.1, 2.2))
    cur = sym
    for _ in range(80):
        cur = apply_propagator(block, cur)
    odd_part = 0.5 * (cur.amplitudes - cur.amplitudes[::-1])
    fraction = np.sqrt(grid300.dx * np.sum(np.abs(odd_part) ** 2) / cur.norm())
    assert fraction < 1e-6


def test_tunnel_time_from_synthetic_cosine():
    tau_true = 51.7
    times = np.arange(200) * 0.4
    series = ExpectationSeries(times, 2.1 * np.cos(np.pi * times / tau_true), "position")
    tau = tunnel_time_dynamic(series)
    assert abs(tau - tau_true) < 0.4


def test_tunnel_time_needs_reversal():
    times = np.arange(50) * 0.4
    series = ExpectationSeries(times, np.exp(-times / 30.0), "position")
    with pytest.raises(TunnelEventNotFound):
        tunnel_time_dynamic(series)


def test_splitting_times():
    assert np.isclose(tunnel_time_splitting(0.0, np.pi), 1.0)
    assert abs(tunnel_time_splitting(0.0, 0.05117) - 61.4) < 0.05
    assert abs(tunnel_time_splitting(0.433, 0.433 + 0.0608) - 51.7) < 0.05
    with pytest.raises(ValueError):
        tunnel_time_splitting(0.5, 0.5)
    with pytest.raises(ValueError):
        tunnel_time_splitting(0.6, 0.5)


def test_doublet_gap_growth_in_oracle(dw):
    grid = SpatialGrid(-7.0, 7.0, 1400)
    levels = stencil_eigenvalues(dw, grid, 8)
    means = levels.reshape(4, 2).mean(axis=1)
    gaps = np.diff(means)
    assert np.all(np.diff(gaps) > 0)
