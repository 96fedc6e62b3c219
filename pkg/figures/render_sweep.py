#!/usr/bin/env python3
"""Render the photon-correlation sweep: g2(0) against the mixing-angle cosine.

Usage: render_sweep.py SWEEP_CSV OUTPUT_IMAGE

Reads the sweep CSV written by the simulator (columns cos_theta, g2, ...)
and draws g2(0) on a log axis. Exit codes: 0 on success, 2 for unusable
input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from figcsv import PlotSpec, SchemaError, read_table


def render(spec: PlotSpec):
    table = read_table(spec.csv_path)
    spec.validate(table.header)
    x = table.column(spec.x_column)
    y = table.column(spec.y_columns[0])
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.plot(x, y, marker="o", color="tab:blue")
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel(r"$\cos\theta$")
    ax.set_ylabel(r"$g^{(2)}(0)$")
    ax.set_title("Dark-polariton photon correlation vs mixing angle")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv", type=Path)
    parser.add_argument("output", type=Path)
    parser.add_argument("--x-column", default="cos_theta")
    parser.add_argument("--y-column", default="g2")
    parser.add_argument(
        "--linear", action="store_true", help="linear instead of log y axis"
    )
    args = parser.parse_args(argv)
    spec = PlotSpec(
        csv_path=args.csv,
        x_column=args.x_column,
        y_columns=(args.y_column,),
        output_path=args.output,
        log_y=not args.linear,
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
