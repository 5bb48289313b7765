#!/usr/bin/env python3
"""Plot the CSV artifacts an experiment run leaves behind.

    python3 scripts/plot_results.py out/harmonic_alpha2 [--save figures/]

Picks up whichever of expectations.csv, density.csv, spectrum.csv, peaks.csv
and norm.csv exist in the directory.  Requires matplotlib.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    return data


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("rundir", type=Path)
    parser.add_argument("--save", type=Path, default=None,
                        help="directory for PNG output (default: <rundir>/figures)")
    args = parser.parse_args()
    outdir = args.save or args.rundir / "figures"
    outdir.mkdir(parents=True, exist_ok=True)

    made = []

    exp_csv = args.rundir / "expectations.csv"
    if exp_csv.exists():
        d = load(exp_csv)
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
        ax1.plot(d["t"], d["x"], label="<x>")
        ax1.set_ylabel("position")
        ax1.legend()
        for key, label in (("kinetic", "<T>"), ("potential", "<V>"), ("energy", "<H>")):
            ax2.plot(d["t"], d[key], label=label)
        ax2.set_xlabel("t")
        ax2.set_ylabel("energy")
        ax2.legend()
        fig.savefig(outdir / "expectations.png", dpi=150)
        made.append("expectations.png")

    den_csv = args.rundir / "density.csv"
    if den_csv.exists():
        d = load(den_csv)
        times = np.unique(d["t"])
        xs = np.unique(d["x"])
        gridded = d["density"].reshape(len(times), len(xs))
        fig, ax = plt.subplots(figsize=(7, 4))
        mesh = ax.pcolormesh(xs, times, gridded, shading="auto")
        fig.colorbar(mesh, ax=ax, label="|psi|^2")
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        fig.savefig(outdir / "density.png", dpi=150)
        made.append("density.png")

    spec_csv = args.rundir / "spectrum.csv"
    if spec_csv.exists():
        d = load(spec_csv)
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(d["energy"], d["magnitude"], lw=0.8)
        peaks_csv = args.rundir / "peaks.csv"
        if peaks_csv.exists():
            p = np.atleast_1d(load(peaks_csv))
            ax.plot(p["energy"], p["magnitude"], "rx")
        ax.set_xlabel("E")
        ax.set_ylabel("|FT of trace|")
        fig.savefig(outdir / "spectrum.png", dpi=150)
        made.append("spectrum.png")

    norm_csv = args.rundir / "norm.csv"
    if norm_csv.exists():
        d = load(norm_csv)
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(d["x"], d["norm_numeric"], label="numeric")
        if "norm_analytic" in (d.dtype.names or ()):
            ax.plot(d["x"], d["norm_analytic"], "--", label="closed form, same lattice")
        ax.axhline(1.0, color="k", lw=0.5)
        ax.set_xlabel("starting point x")
        ax.set_ylabel("total transition probability")
        ax.legend()
        fig.savefig(outdir / "norm.png", dpi=150)
        made.append("norm.png")

    print(f"wrote {', '.join(made) if made else 'nothing (no known CSVs found)'} to {outdir}")


if __name__ == "__main__":
    main()
