"""Batch front-end: read an experiment config, run one pipeline, write files.

Command shape:

    pathprop <propagate|spectrum|tunnel|normcheck> --config FILE [--out DIR] [--threads N]

Exit codes: 0 ok, 2 config error, 3 numerical abort, 4 no tunnelling event.
Heavy imports happen inside main() so that --threads can pin the BLAS pool
before numpy loads.
"""

import argparse
import json
import os
import sys
from pathlib import Path


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def _fmt(v) -> str:
    # 17 significant digits round-trips float64 exactly; locale-independent
    return format(float(v), ".17g")


def _load_config(spec: str) -> dict:
    path = Path(spec)
    if not path.is_file():
        from importlib.resources import files

        name = spec if spec.endswith(".json") else spec + ".json"
        candidate = files("pathprop") / "configs" / name
        if candidate.is_file():
            path = candidate
        else:
            shipped = sorted(p.stem for p in (files("pathprop") / "configs").iterdir()
                             if p.name.endswith(".json"))
            raise ConfigError(f"config '{spec}' is neither a file nor a preset; "
                              f"shipped presets: {', '.join(shipped)}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc


def _require(cfg: dict, key: str, where: str = "config"):
    if key not in cfg:
        raise ConfigError(f"missing '{key}' in {where}")
    return cfg[key]


def _build_model(spec: dict):
    from . import model as m

    name = _require(spec, "name", "model")
    if name == "harmonic":
        return m.harmonic_model()
    if name == "free":
        return m.free_model()
    if name == "double_well":
        params = m.DoubleWellParams(strength=float(_require(spec, "alpha", "model")),
                                    well_position=float(_require(spec, "x_min", "model")))
        return m.double_well_model(params)
    if name == "custom":
        coeffs = _require(spec, "coeffs", "model")
        return m.PotentialModel(coefficients=tuple(float(c) for c in coeffs),
                                mass=float(spec.get("mass", 1.0)))
    raise ConfigError(f"unknown model '{name}'")


class Experiment:
    """Validated experiment: every module precondition is checked up front."""

    def __init__(self, cfg: dict):
        from .lattice import SpatialGrid, TimeSlicing

        self.pipeline = _require(cfg, "pipeline")
        if self.pipeline not in ("propagate", "spectrum", "tunnel", "normcheck"):
            raise ConfigError(f"unknown pipeline '{self.pipeline}'")
        try:
            self.model = _build_model(_require(cfg, "model"))
            g = _require(cfg, "grid")
            self.grid = SpatialGrid(float(_require(g, "x_min", "grid")),
                                    float(_require(g, "x_max", "grid")),
                                    int(_require(g, "D", "grid")))
            s = _require(cfg, "slicing")
            self.slicing = TimeSlicing(block_time=float(_require(s, "T", "slicing")),
                                       slices=int(_require(s, "N", "slicing")),
                                       blocks=int(_require(s, "N_T", "slicing")))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        self.state_spec = cfg.get("initial_state")
        self.snapshot_stride = int(cfg.get("snapshot_stride", 1))
        self.peak_threshold = float(cfg.get("peak_threshold", 0.1))
        self.renormalize_trace = bool(cfg.get("renormalize_trace", True))
        self.output_dir = cfg.get("output_dir", "out")

        if self.pipeline == "tunnel":
            if self.model.label != "double_well":
                raise ConfigError("tunnel pipeline requires a double_well model")
            if self.state_spec is None:
                self.state_spec = {"type": "localized", "trial": "fit"}
            if self.state_spec.get("type") != "localized":
                raise ConfigError("tunnel pipeline requires a localized initial state")
            self._validate_state_spec()
        if self.pipeline == "propagate":
            if self.state_spec is None:
                raise ConfigError("propagate pipeline requires an initial_state")
            self._validate_state_spec()
        if self.snapshot_stride < 0:
            raise ConfigError("snapshot_stride must be >= 0")
        if not 0.0 < self.peak_threshold < 1.0:
            raise ConfigError("peak_threshold must be in (0, 1)")

    def _validate_state_spec(self):
        kind = self.state_spec.get("type")
        if kind == "gaussian":
            alpha = float(_require(self.state_spec, "alpha", "initial_state"))
            x_start = float(_require(self.state_spec, "x_start", "initial_state"))
            if alpha <= 0:
                raise ConfigError("gaussian width parameter must be positive")
            if x_start not in self.grid:
                raise ConfigError(f"x_start {x_start} outside the grid")
        elif kind == "localized":
            if self.model.label != "double_well":
                raise ConfigError("localized initial state requires a double_well model")
            trial = self.state_spec.get("trial", "fit")
            if trial != "fit":
                from .tunneling import TrialParams

                try:
                    params = TrialParams(width=float(_require(trial, "width", "trial")),
                                         displacement=float(_require(trial, "displacement",
                                                                     "trial")))
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"bad trial parameters: {exc}") from exc
                if params.displacement not in self.grid:
                    raise ConfigError(f"trial displacement {params.displacement} "
                                      "outside the grid")
        else:
            raise ConfigError(f"unknown initial_state type '{kind}'")

    # -- warnings ---------------------------------------------------------
    def warn_about_ranges(self):
        import numpy as np

        if self.pipeline in ("spectrum", "tunnel"):
            edge = max(abs(self.grid.x_min), abs(self.grid.x_max))
            cap = 2.0 * np.pi / self.slicing.block_time
            v_edge = float(self.model.potential(np.array([edge]))[0])
            if v_edge > cap:
                print(f"warning: V at the grid edge ({v_edge:.3g}) exceeds the "
                      f"spectral range 2*pi/T = {cap:.3g}; high levels will alias "
                      "into the comb", file=sys.stderr)
        box = self.grid.x_max - self.grid.x_min
        window = np.pi * self.slicing.dt / (self.model.mass * self.grid.dx)
        if window < 0.75 * box:
            print(f"warning: pi*dt/(m*dx) = {window:.3g} is well below the box "
                  f"size {box:.3g}; far kernel columns are under-sampled and "
                  "long products may grow spurious modes (increase dt, refine "
                  "dx, or shrink the box)", file=sys.stderr)

    # -- shared builders ---------------------------------------------------
    def build_block(self):
        from .propagator import build_kernel, compose

        kernel = build_kernel(self.model, self.grid, self.slicing.dt)
        return compose(kernel, self.slicing.slices)

    def initial_state(self):
        from .dynamics import gaussian_state

        kind = self.state_spec.get("type")
        if kind == "gaussian":
            return gaussian_state(self.grid, float(self.state_spec["alpha"]),
                                  float(self.state_spec["x_start"])), None
        return self._localized_state()

    def _localized_state(self):
        from .tunneling import (FitResult, TrialParams, localized_state,
                                trial_states, variational_fit)
        from .dynamics import expectation, hamiltonian_observable

        trial = self.state_spec.get("trial", "fit")
        if trial == "fit":
            fit_s = variational_fit(self.model, self.grid, "S")
            fit_a = variational_fit(self.model, self.grid, "A")
        else:
            try:
                params = TrialParams(width=float(_require(trial, "width", "trial")),
                                     displacement=float(_require(trial, "displacement", "trial")))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad trial parameters: {exc}") from exc
            ham = hamiltonian_observable(self.model, self.grid)
            sym, asym = trial_states(self.grid, params)
            fit_s = FitResult(params, expectation(sym, ham), True)
            fit_a = FitResult(params, expectation(asym, ham), True)
        sym, _ = trial_states(self.grid, fit_s.params)
        _, asym = trial_states(self.grid, fit_a.params)
        psi = localized_state(sym, asym)
        return psi, (fit_s, fit_a)


# -- output writers --------------------------------------------------------

def _write_csv(path: Path, header: str, rows) -> Path:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _write_expectations(out: Path, record) -> Path:
    columns = {s.observable: s.values for s in record.series}
    rows = zip(record.times, columns["position"], columns["kinetic"],
               columns["potential"], columns["energy"], record.norms)
    return _write_csv(out / "expectations.csv", "t,x,kinetic,potential,energy,norm", rows)


def _write_density(out: Path, grid, record) -> Path:
    x = grid.points()
    rows = ((t, x[i], snap[i])
            for t, snap in zip(record.snapshot_times, record.snapshots)
            for i in range(len(x)))
    return _write_csv(out / "density.csv", "t,x,density", rows)


def _evolve(exp: Experiment, block, psi, steps: int):
    from .dynamics import (evolve_and_record, hamiltonian_observable,
                           kinetic_observable, position_observable,
                           potential_observable)

    observables = [position_observable(exp.grid),
                   kinetic_observable(exp.grid, exp.model.mass),
                   potential_observable(exp.model, exp.grid),
                   hamiltonian_observable(exp.model, exp.grid)]
    return evolve_and_record(block, psi, steps, observables,
                             snapshot_stride=exp.snapshot_stride)


def run_propagate(exp: Experiment, out: Path):
    block = exp.build_block()
    psi, _ = exp.initial_state()
    record = _evolve(exp, block, psi, exp.slicing.blocks)
    return [_write_expectations(out, record), _write_density(out, exp.grid, record)]


def run_spectrum(exp: Experiment, out: Path):
    from .spectral import find_peaks, spectrum_from_trace, trace_ladder

    block = exp.build_block()
    trace = trace_ladder(block, exp.slicing.blocks, exp.renormalize_trace)
    spec = spectrum_from_trace(trace)
    peaks = find_peaks(spec, exp.peak_threshold)
    files = [
        _write_csv(out / "trace.csv", "t,re,im",
                   zip(trace.times(), trace.values.real, trace.values.imag)),
        _write_csv(out / "spectrum.csv", "energy,magnitude",
                   zip(spec.energies, spec.magnitudes)),
        _write_csv(out / "peaks.csv", "energy,magnitude",
                   ((p.energy, p.magnitude) for p in peaks.peaks)),
    ]
    return files


def run_tunnel(exp: Experiment, out: Path):
    from .dynamics import norm_preserving_block
    from .spectral import find_peaks, spectrum_from_trace, trace_ladder
    from .tunneling import tunnel_time_dynamic, tunnel_time_splitting

    block = exp.build_block()
    psi, fits = exp.initial_state()
    fit_s, fit_a = fits
    with open(out / "fit_log.json", "w", encoding="utf-8") as fh:
        json.dump({parity: {"width": fit.params.width,
                            "displacement": fit.params.displacement,
                            "energy": fit.energy,
                            "converged": fit.converged}
                   for parity, fit in (("S", fit_s), ("A", fit_a))}, fh, indent=2)
        fh.write("\n")

    # the tunnelling window spans hundreds of blocks; rescale once so the
    # kernel's uniform amplitude defect cannot masquerade as leakage
    record = _evolve(exp, norm_preserving_block(block, psi), psi, exp.slicing.blocks)
    files = [out / "fit_log.json",
             _write_expectations(out, record),
             _write_density(out, exp.grid, record)]

    position = next(s for s in record.series if s.observable == "position")
    tau_dyn = tunnel_time_dynamic(position)

    trace = trace_ladder(block, exp.slicing.blocks, exp.renormalize_trace)
    peaks = find_peaks(spectrum_from_trace(trace), exp.peak_threshold)
    if len(peaks.peaks) < 2:
        raise FloatingPointError("fewer than two spectrum peaks; cannot split the doublet")
    e_s_peak, e_a_peak = (p.energy for p in peaks.peaks[:2])

    report = {
        "tau_dynamic": tau_dyn,
        "tau_split_variational": tunnel_time_splitting(fit_s.energy, fit_a.energy),
        "tau_split_spectrum": tunnel_time_splitting(e_s_peak, e_a_peak),
        "E_S_var": fit_s.energy,
        "E_A_var": fit_a.energy,
        "E_S_peak": e_s_peak,
        "E_A_peak": e_a_peak,
    }
    with open(out / "tunnel_report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    files.append(out / "tunnel_report.json")
    return files


def run_normcheck(exp: Experiment, out: Path):
    from .propagator import norm_profile
    from .reference import harmonic_kernel

    block = exp.build_block()
    profile = norm_profile(block)
    if exp.model.label == "harmonic":
        exact = norm_profile(harmonic_kernel(exp.grid, block.elapsed, exp.model.mass))
        rows = zip(profile.positions, profile.values, exact.values)
        header = "x,norm_numeric,norm_analytic"
    else:
        rows = zip(profile.positions, profile.values)
        header = "x,norm_numeric"
    return [_write_csv(out / "norm.csv", header, rows)]


_PIPELINES = {
    "propagate": run_propagate,
    "spectrum": run_spectrum,
    "tunnel": run_tunnel,
    "normcheck": run_normcheck,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pathprop",
        description="Real-time path-integral propagator experiments")
    parser.add_argument("pipeline", choices=sorted(_PIPELINES))
    parser.add_argument("--config", required=True,
                        help="JSON experiment file or shipped preset name")
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument("--threads", type=int, default=None,
                        help="BLAS thread count (default: machine parallelism)")
    args = parser.parse_args(argv)

    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return 2
        for var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)

    try:
        cfg = _load_config(args.config)
        exp = Experiment(cfg)
        if exp.pipeline != args.pipeline:
            raise ConfigError(f"config is for pipeline '{exp.pipeline}', "
                              f"but '{args.pipeline}' was requested")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    out = Path(args.out if args.out is not None else exp.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    exp.warn_about_ranges()

    from .dynamics import NormDecayError
    from .tunneling import TunnelEventNotFound

    try:
        files = _PIPELINES[exp.pipeline](exp, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TunnelEventNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (FloatingPointError, NormDecayError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
