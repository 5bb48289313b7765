"""Double-well tunnelling: variational trial doublet, localized states and
tunnelling times from two independent routes.

A particle localized in one well is the superposition (psi_S + psi_A)/sqrt(2)
of the lowest symmetric and antisymmetric states.  Since U(t) only advances
their relative phase by (E_A - E_S) * t, a complete transfer to the mirror
well takes tau0 = pi / (E_A - E_S).  That splitting time is compared with the
tunnelling time read directly off the <x>(t) evolution.
"""

from dataclasses import dataclass

import numpy as np

from .dynamics import ExpectationSeries, WaveFunction, hamiltonian_observable
from .lattice import SpatialGrid
from .model import PotentialModel


class TunnelEventNotFound(RuntimeError):
    """No sign-reversed extremum of <x>(t) inside the recorded window."""


@dataclass(frozen=True)
class TrialParams:
    """Displaced-Gaussian doublet: width and displacement of exp(-(x-+b)^2/(2 w^2))."""

    width: float
    displacement: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"width must be positive, got {self.width}")
        if not self.displacement > 0:
            raise ValueError(f"displacement must be positive, got {self.displacement}")


@dataclass(frozen=True)
class FitResult:
    params: TrialParams
    energy: float
    converged: bool


@dataclass(frozen=True)
class TunnelReport:
    tau_dynamic: float            # first mirror-well arrival of <x>(t)
    tau_split_variational: float  # pi / variational splitting
    tau_split_spectrum: float     # pi / spectrum-peak splitting
    e_s_var: float
    e_a_var: float
    e_s_peak: float
    e_a_peak: float


def trial_states(grid: SpatialGrid, params: TrialParams):
    """Symmetric ('+') and antisymmetric ('-') displaced-Gaussian pair.

    Both are renormalized numerically on the grid; the closed-form prefactor
    would not normalize the combinations anyway.
    """
    if params.displacement not in grid:
        raise ValueError(f"displacement {params.displacement} outside grid")
    x = grid.points()
    w2 = 2.0 * params.width ** 2
    right = np.exp(-((x - params.displacement) ** 2) / w2)
    left = np.exp(-((x + params.displacement) ** 2) / w2)
    sym = WaveFunction((right + left).astype(np.complex128), grid).normalized()
    asym = WaveFunction((right - left).astype(np.complex128), grid).normalized()
    return sym, asym


def _golden_min(f, lo, hi, tol):
    # golden-section line search for a unimodal objective
    gr = 0.5 * (np.sqrt(5.0) - 1.0)
    c = hi - gr * (hi - lo)
    d = lo + gr * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - gr * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + gr * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def variational_fit(model: PotentialModel, grid: SpatialGrid, parity: str,
                    width_range=(0.3, 3.0), displacement_range=None,
                    fixed_displacement: float = None, scan: int = 20,
                    tol: float = 1e-6, max_sweeps: int = 60) -> FitResult:
    """Minimize the trial-state energy over (width, displacement).

    Coarse scan x scan grid over the parameter box, then coordinate-wise
    golden-section refinement until both parameters move less than `tol` in a
    sweep.  The result is a Rayleigh-Ritz upper bound on the lowest level of
    the requested parity sector ('S' or 'A').
    """
    if parity not in ("S", "A"):
        raise ValueError(f"parity must be 'S' or 'A', got {parity!r}")
    sign = 1.0 if parity == "S" else -1.0
    ham = hamiltonian_observable(model, grid)
    x = grid.points()
    dx = grid.dx

    def energy(width, displacement):
        w2 = 2.0 * width * width
        t = np.exp(-((x - displacement) ** 2) / w2) + sign * np.exp(-((x + displacement) ** 2) / w2)
        n2 = dx * (t @ t)
        if not n2 > 1e-280:  # degenerate antisymmetric combination
            return np.inf
        return (dx * (t @ (ham.entries.real @ t))) / n2

    if fixed_displacement is not None:
        b = fixed_displacement
        if not b > 0:
            raise ValueError("fixed_displacement must be positive")
        best_w = min(np.linspace(*width_range, scan), key=lambda w: energy(w, b))
        lo, hi = max(width_range[0], best_w - 0.4), min(width_range[1], best_w + 0.4)
        w = _golden_min(lambda v: energy(v, b), lo, hi, tol)
        return FitResult(TrialParams(w, b), energy(w, b), True)

    if displacement_range is None:
        # for a quartic double well the minima sit near the classical wells
        top = 1.5 * _well_position_guess(model, grid)
        displacement_range = (0.2, top)

    ws = np.linspace(*width_range, scan)
    bs = np.linspace(*displacement_range, scan)
    grid_best = min(((energy(w, b), w, b) for w in ws for b in bs))
    _, w, b = grid_best

    w_lo, w_hi = width_range
    b_lo, b_hi = displacement_range
    converged = False
    for _ in range(max_sweeps):
        w_new = _golden_min(lambda v: energy(v, b), max(w_lo, w - 0.5), min(w_hi, w + 0.5), tol)
        b_new = _golden_min(lambda v: energy(w_new, v), max(b_lo, b - 0.5), min(b_hi, b + 0.5), tol)
        moved = max(abs(w_new - w), abs(b_new - b))
        w, b = w_new, b_new
        if moved < tol:
            converged = True
            break
    return FitResult(TrialParams(w, b), energy(w, b), converged)


def _well_position_guess(model: PotentialModel, grid: SpatialGrid) -> float:
    x = grid.points()
    half = x > 0
    pos = x[half][np.argmin(model.potential(x[half]))]
    return float(pos) if pos > 0 else 0.25 * grid.x_max


def localized_state(sym: WaveFunction, asym: WaveFunction, side: int = +1) -> WaveFunction:
    """(sym + side*asym)/sqrt(2), renormalized: probability piles up in one well."""
    if side not in (+1, -1):
        raise ValueError("side must be +1 or -1")
    amp = (sym.amplitudes + side * asym.amplitudes) / np.sqrt(2.0)
    return WaveFunction(amp, sym.grid).normalized()


def side_probability(psi: WaveFunction, side: int = +1) -> float:
    """Probability mass on one side of the origin."""
    x = psi.grid.points()
    sel = x > 0 if side > 0 else x < 0
    return float(psi.grid.dx * np.sum(np.abs(psi.amplitudes[sel]) ** 2))


def tunnel_time_dynamic(series: ExpectationSeries) -> float:
    """Time of the first extremum of <x>(t) with sign opposite to the start.

    The series must start near an extremum (a freshly localized state).  The
    extremal sample and its two neighbours are refined by a parabolic fit.
    """
    xs = np.asarray(series.values)
    ts = np.asarray(series.times)
    if len(xs) < 3:
        raise TunnelEventNotFound("series too short to bracket an extremum")
    s0 = np.sign(xs[0])
    if s0 == 0:
        raise TunnelEventNotFound("series does not start away from the origin")
    for k in range(1, len(xs) - 1):
        if np.sign(xs[k]) == -s0:
            is_min = s0 > 0 and xs[k] <= xs[k - 1] and xs[k] <= xs[k + 1]
            is_max = s0 < 0 and xs[k] >= xs[k - 1] and xs[k] >= xs[k + 1]
            if is_min or is_max:
                y0, y1, y2 = xs[k - 1], xs[k], xs[k + 1]
                denom = y0 - 2.0 * y1 + y2
                shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
                dt = ts[1] - ts[0]
                return float(ts[k] + shift * dt)
    raise TunnelEventNotFound("no sign-reversed extremum of <x>(t) in the recorded window")


def tunnel_time_splitting(e_s: float, e_a: float) -> float:
    """pi / (E_A - E_S): the relative phase of the doublet flips sign."""
    if not e_a > e_s:
        raise ValueError(f"need E_A > E_S, got E_S={e_s}, E_A={e_a}")
    return float(np.pi / (e_a - e_s))
