#!/usr/bin/env python3
"""Render polariton occupation time series from a trajectory CSV.

Usage: render_timeseries.py TRAJECTORY_CSV OUTPUT_IMAGE --columns n0
       render_timeseries.py TRAJECTORY_CSV OUTPUT_IMAGE --columns n1 n2 --logy

The linear mode pins the lower y limit at zero with headroom above one,
matching the occupancy-ceiling reading of the dark-polariton plots. Exit
codes: 0 on success, 2 for unusable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from figcsv import PlotSpec, SchemaError, read_table

LABELS = {
    "n0": r"$n_0$",
    "n1": r"$n_1$",
    "n2": r"$n_2$",
    "n_pair": r"$n_{\mathrm{pair}}$",
    "photon": r"$\langle a^\dagger a\rangle$",
}


def render(spec: PlotSpec):
    table = read_table(spec.csv_path)
    spec.validate(table.header)
    t = table.column(spec.x_column)
    fig, ax = plt.subplots(figsize=(5.6, 3.4))
    top = 0.0
    for name in spec.y_columns:
        values = table.column(name)
        top = max(top, float(values.max(initial=0.0)))
        ax.plot(t, values, label=LABELS.get(name, name))
    if spec.log_y:
        ax.set_yscale("log")
    else:
        ax.set_ylim(0.0, max(1.05, 1.05 * top))
    ax.set_xlabel(r"$t\,\kappa$")
    ax.set_ylabel("occupation")
    ax.set_title("Polariton occupation vs time")
    if len(spec.y_columns) > 1:
        ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", type=Path)
    parser.add_argument("output", type=Path)
    parser.add_argument(
        "--columns", nargs="+", default=["n0"], help="occupation columns to draw"
    )
    parser.add_argument("--logy", action="store_true")
    parser.add_argument("--x-column", default="t")
    args = parser.parse_args(argv)
    spec = PlotSpec(
        csv_path=args.csv,
        x_column=args.x_column,
        y_columns=tuple(args.columns),
        output_path=args.output,
        log_y=args.logy,
    )
    try:
        fig = render(spec)
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
