"""Shared CSV handling for the figure scripts.

The simulator writes CSVs with a single '#'-prefixed header line followed
by plain numeric rows. The scripts depend only on that schema; nothing
here imports the simulator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Raised when a CSV does not provide what a plot needs."""


@dataclass(frozen=True)
class PlotSpec:
    """What to read and where to draw it."""

    csv_path: Path
    x_column: str
    y_columns: tuple[str, ...]
    output_path: Path
    log_x: bool = False
    log_y: bool = False

    def validate(self, header: list[str]) -> None:
        missing = [
            c for c in (self.x_column, *self.y_columns) if c not in header
        ]
        if missing:
            raise SchemaError(
                f"{self.csv_path}: missing columns {missing}; header has {header}"
            )


@dataclass
class Table:
    header: list[str]
    rows: np.ndarray  # (n_rows, n_columns)

    def column(self, name: str) -> np.ndarray:
        try:
            idx = self.header.index(name)
        except ValueError as exc:
            raise SchemaError(f"no column {name!r} in {self.header}") from exc
        return self.rows[:, idx]


def read_table(path: Path) -> Table:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise SchemaError(f"{path}: expected a '#'-prefixed header line")
    header = lines[0].lstrip("#").strip().split(",")
    data_lines = [ln for ln in lines[1:] if ln.strip()]
    if not data_lines:
        raise SchemaError(f"{path}: no data rows")
    try:
        rows = np.array(
            [[float(v) for v in ln.split(",")] for ln in data_lines]
        )
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric data row: {exc}") from exc
    if rows.shape[1] != len(header):
        raise SchemaError(
            f"{path}: rows have {rows.shape[1]} fields for "
            f"{len(header)} header columns"
        )
    return Table(header=header, rows=rows)
