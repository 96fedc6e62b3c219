"""Command-line entry point: configuration, execution, CSV and metadata emission.

Exit codes: 0 on success, 2 for configuration problems (with key or line
diagnostics), 3 for numerical failures (integrator underflow, non-finite
amplitudes).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from polariton_sim import __version__
from polariton_sim.dynamics import (
    IntegrationError,
    IntegratorConfig,
    evolve_schrodinger,
)
from polariton_sim.hamiltonian import add_atomic_decay
from polariton_sim.hilbert import build_basis, vacuum_state
from polariton_sim.model import PhysicalParams, derive_params, feasibility_report
from polariton_sim.observables import (
    HAMILTONIAN_BUILDERS,
    population_series,
    sweep_costheta,
    transmission_spectrum,
)

__all__ = ["main", "RunConfig", "ConfigError", "format_float", "write_csv"]

MODES_OF_OPERATION = ("simulate", "sweep", "spectrum", "feasibility")

PHYSICAL_KEYS = (
    "n_atoms",
    "g",
    "kappa",
    "gamma_e",
    "gamma_r",
    "chi_bar",
    "cos_theta",
    "beta",
    "delta",
)

RUN_KEYS = (
    "mode",
    "hamiltonian",
    "n_tot_max",
    "hard_core_pair",
    "atomic_decay",
    "grid",
    "out_dir",
    "window",
    "units",
    "threshold",
    "workers",
)

INTEGRATOR_KEYS = ("t_start", "t_end", "output_stride", "rtol", "atol", "max_step")


class ConfigError(ValueError):
    """Configuration problem; maps to exit code 2."""


@dataclass
class RunConfig:
    physical: PhysicalParams
    integrator: IntegratorConfig
    mode: str
    out_dir: Path
    hamiltonian: str = "full"
    n_tot_max: int = 4
    hard_core_pair: bool = False
    atomic_decay: bool = True
    grid: np.ndarray | None = None
    window: float = 0.5
    units: str = "kappa"
    threshold: float = 50.0
    workers: int | None = None


def format_float(x: float) -> str:
    """Decimal form capped at 12 significant digits, trailing zeros trimmed."""
    return f"{x:.12g}"


def write_csv(path: Path, header: list[str], rows) -> None:
    """CSV with a single '#'-prefixed header line and 12-digit floats."""
    lines = ["#" + ",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                format_float(v) if isinstance(v, float) else str(v) for v in row
            )
        )
    path.write_text("\n".join(lines) + "\n")


def parse_grid(spec) -> np.ndarray:
    """Grid from a comma list ('a,b,c') or a 'start:stop:count' range."""
    if isinstance(spec, (list, tuple)):
        return np.asarray([float(v) for v in spec], dtype=float)
    text = str(spec).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid range must be start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ConfigError(f"grid count must be >= 1, got {count}")
        return np.linspace(start, stop, count)
    try:
        return np.asarray([float(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid {text!r}: {exc}") from exc


def _load_toml(path: Path) -> dict:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return tomllib.loads(raw.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polariton-sim",
        description=(
            "Simulate photon blockade of cavity dark-state polaritons: "
            "time evolution, mixing-angle sweeps, transmission spectra, "
            "and feasibility estimates."
        ),
    )
    parser.add_argument(
        "mode_positional",
        nargs="?",
        choices=MODES_OF_OPERATION,
        metavar="mode",
        help="one of: simulate, sweep, spectrum, feasibility",
    )
    parser.add_argument("--config", type=Path, help="TOML config file")
    parser.add_argument("--mode", choices=MODES_OF_OPERATION)
    parser.add_argument("--out-dir", type=Path)
    parser.add_argument("--hamiltonian", choices=sorted(HAMILTONIAN_BUILDERS))
    parser.add_argument("--n-tot-max", type=int)
    parser.add_argument("--cos-theta", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--t-end", type=float)
    parser.add_argument(
        "--grid", help="comma list ('0.04,0.1') or range ('0.04:0.3:5')"
    )
    parser.add_argument("--version", action="version", version=__version__)
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config is not None:
        data = _load_toml(args.config)
    unknown = set(data) - set(PHYSICAL_KEYS) - set(RUN_KEYS) - set(INTEGRATOR_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    # Flags override config keys one-to-one.
    overrides = {
        "cos_theta": args.cos_theta,
        "beta": args.beta,
        "t_end": args.t_end,
        "hamiltonian": args.hamiltonian,
        "n_tot_max": args.n_tot_max,
        "grid": args.grid,
        "out_dir": args.out_dir,
    }
    for key, value in overrides.items():
        if value is not None:
            data[key] = value

    mode = args.mode or args.mode_positional or data.get("mode")
    if mode is None:
        raise ConfigError(
            "no mode selected; pass one of "
            f"{MODES_OF_OPERATION} as an argument, --mode, or config key 'mode'"
        )
    if mode not in MODES_OF_OPERATION:
        raise ConfigError(f"unknown mode {mode!r}; expected {MODES_OF_OPERATION}")

    missing = [k for k in PHYSICAL_KEYS if k != "delta" and k not in data]
    if missing:
        raise ConfigError(f"missing required config keys: {missing}")
    try:
        physical = PhysicalParams(
            n_atoms=int(data["n_atoms"]),
            g=float(data["g"]),
            kappa=float(data["kappa"]),
            gamma_e=float(data["gamma_e"]),
            gamma_r=float(data["gamma_r"]),
            chi_bar=float(data["chi_bar"]),
            cos_theta=float(data["cos_theta"]),
            beta=float(data["beta"]),
            delta=float(data.get("delta", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad physical parameters: {exc}") from exc

    try:
        integrator = IntegratorConfig(
            t_start=float(data.get("t_start", 0.0)),
            t_end=float(data.get("t_end", 500.0)),
            output_stride=float(data.get("output_stride", 0.5)),
            rtol=float(data.get("rtol", 1e-9)),
            atol=float(data.get("atol", 1e-12)),
            max_step=float(data.get("max_step", math.inf)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad integrator settings: {exc}") from exc

    grid = None
    if "grid" in data:
        grid = parse_grid(data["grid"])

    hamiltonian = str(data.get("hamiltonian", "full"))
    if hamiltonian not in HAMILTONIAN_BUILDERS:
        raise ConfigError(
            f"unknown hamiltonian {hamiltonian!r}; "
            f"expected one of {sorted(HAMILTONIAN_BUILDERS)}"
        )

    workers = data.get("workers")
    return RunConfig(
        physical=physical,
        integrator=integrator,
        mode=mode,
        out_dir=Path(data.get("out_dir", "out")),
        hamiltonian=hamiltonian,
        n_tot_max=int(data.get("n_tot_max", 4)),
        hard_core_pair=bool(data.get("hard_core_pair", False)),
        atomic_decay=bool(data.get("atomic_decay", True)),
        grid=grid,
        window=float(data.get("window", 0.5)),
        units=str(data.get("units", "kappa")),
        threshold=float(data.get("threshold", 50.0)),
        workers=int(workers) if workers is not None else None,
    )


def _write_metadata(
    config: RunConfig, outputs: list[str], wall_time: float
) -> Path:
    dp = derive_params(config.physical)
    derived = {
        f.name: getattr(dp, f.name)
        for f in dataclasses.fields(dp)
        if f.name != "physical"
    }
    derived["bright_pair_coupling"] = dp.bright_pair_coupling
    derived["cross_pair_coupling"] = dp.cross_pair_coupling
    meta = {
        "tool": "polariton-sim",
        "version": __version__,
        "mode": config.mode,
        "wall_time_s": wall_time,
        "physical": dataclasses.asdict(config.physical),
        "derived": derived,
        "run": {
            "hamiltonian": config.hamiltonian,
            "n_tot_max": config.n_tot_max,
            "hard_core_pair": config.hard_core_pair,
            "atomic_decay": config.atomic_decay,
            "window": config.window,
            "units": config.units,
            "threshold": config.threshold,
            "grid": None if config.grid is None else list(map(float, config.grid)),
        },
        "integrator": dataclasses.asdict(config.integrator),
        "outputs": outputs,
    }
    path = config.out_dir / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, default=str) + "\n")
    return path


def _run_feasibility(config: RunConfig) -> list[str]:
    report = feasibility_report(
        config.physical, threshold=config.threshold, units=config.units
    )
    print(report.format_table())
    path = config.out_dir / "feasibility.csv"
    write_csv(
        path,
        ["quantity", "value"],
        [(name, float(value)) for name, value in report.csv_rows()],
    )
    return [path.name]


def _run_simulate(config: RunConfig) -> list[str]:
    dp = derive_params(config.physical)
    basis = build_basis(config.n_tot_max, hard_core_pair=config.hard_core_pair)
    h = HAMILTONIAN_BUILDERS[config.hamiltonian](dp, basis)
    if config.atomic_decay:
        h = add_atomic_decay(h, dp)
    traj = evolve_schrodinger(h, vacuum_state(basis), config.integrator)
    pops = population_series(traj, basis, dp)
    names = ["t", "norm", "n0", "n1", "n2", "n_pair", "photon"]
    norms = traj.norms
    rows = [
        (
            float(traj.times[i]),
            float(norms[i]),
            float(pops["n0"][i]),
            float(pops["n1"][i]),
            float(pops["n2"][i]),
            float(pops["n_pair"][i]),
            float(pops["photon"][i]),
        )
        for i in range(len(traj.times))
    ]
    path = config.out_dir / "trajectory.csv"
    write_csv(path, names, rows)
    return [path.name]


def _run_sweep(config: RunConfig) -> list[str]:
    if config.grid is None:
        raise ConfigError("sweep mode requires a grid of cos_theta values")
    result = sweep_costheta(
        config.physical,
        config.grid,
        config.integrator,
        hamiltonian=config.hamiltonian,
        n_tot_max=config.n_tot_max,
        hard_core_pair=config.hard_core_pair,
        atomic_decay=config.atomic_decay,
        window=config.window,
        workers=config.workers,
    )
    rows = [
        (
            float(result.grid[i]),
            float(result.columns["g2"][i]),
            float(result.columns["n0_mean"][i]),
            float(result.columns["n1_max"][i]),
            float(result.columns["n2_max"][i]),
            config.n_tot_max,
            float(config.window),
        )
        for i in range(len(result.grid))
    ]
    path = config.out_dir / "sweep.csv"
    write_csv(
        path,
        ["cos_theta", "g2", "n0_mean", "n1_max", "n2_max", "truncation", "window"],
        rows,
    )
    return [path.name]


def _run_spectrum(config: RunConfig) -> list[str]:
    if config.grid is None:
        raise ConfigError("spectrum mode requires a grid of detuning values")
    basis = build_basis(config.n_tot_max, hard_core_pair=config.hard_core_pair)
    result = transmission_spectrum(
        config.physical,
        basis,
        config.grid,
        config.integrator,
        window=config.window,
        workers=config.workers,
    )
    rows = [
        (float(result.grid[i]), float(result.columns["photon_number"][i]))
        for i in range(len(result.grid))
    ]
    path = config.out_dir / "spectrum.csv"
    write_csv(path, ["delta", "photon_number"], rows)
    return [path.name]


_RUNNERS = {
    "feasibility": _run_feasibility,
    "simulate": _run_simulate,
    "sweep": _run_sweep,
    "spectrum": _run_spectrum,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    started = time.monotonic()
    try:
        config = load_run_config(args)
        config.out_dir.mkdir(parents=True, exist_ok=True)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        outputs = _RUNNERS[config.mode](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    meta_path = _write_metadata(config, outputs, time.monotonic() - started)
    for name in outputs + [meta_path.name]:
        print(f"wrote {config.out_dir / name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
