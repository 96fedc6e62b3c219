"""Populations, second-order correlations, transmission spectra, and parameter sweeps."""

from __future__ import annotations

import dataclasses
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from polariton_sim.dynamics import (
    IntegratorConfig,
    Trajectory,
    evolve_schrodinger,
    window_average,
)
from polariton_sim.hamiltonian import (
    add_atomic_decay,
    build_h_eff,
    build_h_eit,
    build_h_int,
    build_h_rwa,
)
from polariton_sim.hilbert import (
    Basis,
    OperatorMatrix,
    annihilator,
    build_basis,
    vacuum_state,
)
from polariton_sim.model import (
    DEFAULT_FLAG_THRESHOLD,
    DerivedParams,
    PhysicalParams,
    derive_params,
)

__all__ = [
    "SweepResult",
    "expectation",
    "photon_annihilation",
    "g2_zero",
    "population_series",
    "transmission_spectrum",
    "sweep_costheta",
    "find_local_maxima",
    "peak_fwhm",
    "HAMILTONIAN_BUILDERS",
]

#: Hamiltonian selector names accepted by sweeps and the command line.
HAMILTONIAN_BUILDERS = {
    "full": build_h_int,
    "eit": build_h_eit,
    "rwa": build_h_rwa,
    "eff": build_h_eff,
}


def expectation(op: OperatorMatrix, psi: np.ndarray) -> complex:
    """Normalized expectation value <psi|O|psi> / <psi|psi>."""
    psi = np.asarray(psi, dtype=complex)
    norm_sq = float(np.vdot(psi, psi).real)
    if norm_sq <= 0.0:
        raise ValueError("expectation of a zero-norm state is undefined")
    return complex(np.vdot(psi, op.dot(psi)) / norm_sq)


def photon_annihilation(basis: Basis, dp: DerivedParams) -> OperatorMatrix:
    """Cavity photon operator reconstructed from the polariton modes.

    a = cos(theta) b0 + sin(theta) (b1 + b2) / sqrt(2); the collective
    Rydberg coherence contributions cancel by construction.
    """
    b0 = annihilator(basis, "b0")
    b1 = annihilator(basis, "b1")
    b2 = annihilator(basis, "b2")
    return dp.cos_theta * b0 + (dp.sin_theta / math.sqrt(2.0)) * (b1 + b2)


def g2_zero(traj, basis: Basis, window: float = 0.5) -> float:
    """Equal-time second-order correlation of the dark polariton.

    Ratio of the windowed time average of <b0'b0'b0b0> to the squared
    windowed average of <b0'b0>, both on normalized states. Returns NaN
    (with a warning) when the mean population vanishes.
    """
    b0 = annihilator(basis, "b0")
    b0_dag = b0.adjoint()
    num_op = b0_dag @ b0_dag @ b0 @ b0
    n_op = b0_dag @ b0
    mean_num = window_average(
        traj.times, traj.expectation_series(num_op).real, window
    )
    mean_n = window_average(traj.times, traj.expectation_series(n_op).real, window)
    if mean_n < 1e-12:
        warnings.warn(
            "mean dark-polariton population vanishes; g2(0) undefined",
            stacklevel=2,
        )
        return math.nan
    return float(mean_num / mean_n**2)


def population_series(
    traj, basis: Basis, dp: DerivedParams | None = None
) -> dict[str, np.ndarray]:
    """Occupation time series for every mode, plus the photon number.

    The photon column uses the reconstructed cavity operator and is
    included only when ``dp`` supplies the mixing angle.
    """
    from polariton_sim.hilbert import number_operator

    out: dict[str, np.ndarray] = {}
    for name, mode in (("n0", "b0"), ("n1", "b1"), ("n2", "b2"), ("n_pair", "p")):
        series = traj.expectation_series(number_operator(basis, mode)).real
        out[name] = np.maximum(series, 0.0)
    if dp is not None:
        a = photon_annihilation(basis, dp)
        nph = a.adjoint() @ a
        out["photon"] = np.maximum(traj.expectation_series(nph).real, 0.0)
    return out


@dataclass
class SweepResult:
    """Per-point scalar results over a one-dimensional parameter grid."""

    grid_name: str
    grid: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name, col in self.columns.items():
            if len(col) != len(self.grid):
                raise ValueError(
                    f"column {name!r} has {len(col)} entries for a grid of "
                    f"{len(self.grid)}"
                )

    def is_strictly_increasing(self, column: str) -> bool:
        values = self.columns[column]
        return bool(np.all(np.diff(values) > 0))


# ---------------------------------------------------------------------------
# cos(theta) sweep


def _resolve_workers(workers: int | None, n_items: int) -> int:
    if workers is None:
        env = os.environ.get("POLARITON_SIM_THREADS")
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(workers, n_items))


def _parallel_map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _sweep_point(args) -> dict[str, float]:
    (p_dict, cos_theta, hamiltonian, n_tot_max, hard_core_pair,
     atomic_decay, window, cfg_dict) = args
    p = PhysicalParams(**{**p_dict, "cos_theta": cos_theta})
    dp = derive_params(p)
    basis = build_basis(n_tot_max, hard_core_pair=hard_core_pair)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        h = HAMILTONIAN_BUILDERS[hamiltonian](dp, basis)
    if atomic_decay:
        h = add_atomic_decay(h, dp)
    cfg = IntegratorConfig(**cfg_dict)
    traj = evolve_schrodinger(h, vacuum_state(basis), cfg)
    pops = population_series(traj, basis, dp)
    return {
        "g2": g2_zero(traj, basis, window),
        "n0_mean": float(window_average(traj.times, pops["n0"], window)),
        "n1_max": float(pops["n1"].max()),
        "n2_max": float(pops["n2"].max()),
        "photon_mean": float(window_average(traj.times, pops["photon"], window)),
    }


def sweep_costheta(
    p: PhysicalParams,
    grid,
    cfg: IntegratorConfig,
    hamiltonian: str = "full",
    n_tot_max: int = 4,
    hard_core_pair: bool = False,
    atomic_decay: bool = True,
    window: float = 0.5,
    workers: int | None = None,
) -> SweepResult:
    """Run the full pipeline at each mixing-angle grid point.

    Points are independent and run on a worker pool (capped by the
    POLARITON_SIM_THREADS environment variable); results are ordered by
    grid index regardless of completion order. The returned metadata
    includes a strict-monotonicity flag for the correlation column.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any((grid <= 0) | (grid >= 1)):
        raise ValueError("cos_theta grid values must lie in (0, 1)")
    if hamiltonian not in HAMILTONIAN_BUILDERS:
        raise ValueError(
            f"unknown hamiltonian {hamiltonian!r}; "
            f"expected one of {sorted(HAMILTONIAN_BUILDERS)}"
        )
    margins = [
        derive_params(dataclasses.replace(p, cos_theta=float(c))).rwa_margin
        for c in grid
    ]
    if hamiltonian in ("rwa", "eff") and min(margins) < DEFAULT_FLAG_THRESHOLD:
        warnings.warn(
            f"rotating-wave margin drops to {min(margins):.3g} on this grid; "
            "dropped terms may matter",
            stacklevel=2,
        )
    p_dict = dataclasses.asdict(p)
    cfg_dict = dataclasses.asdict(cfg)
    tasks = [
        (p_dict, float(c), hamiltonian, n_tot_max, hard_core_pair,
         atomic_decay, window, cfg_dict)
        for c in grid
    ]
    rows = _parallel_map(
        _sweep_point, tasks, _resolve_workers(workers, len(tasks))
    )
    columns = {
        key: np.array([row[key] for row in rows])
        for key in ("g2", "n0_mean", "n1_max", "n2_max", "photon_mean")
    }
    result = SweepResult(
        grid_name="cos_theta",
        grid=grid,
        columns=columns,
        metadata={
            "hamiltonian": hamiltonian,
            "n_tot_max": n_tot_max,
            "hard_core_pair": hard_core_pair,
            "atomic_decay": atomic_decay,
            "window": window,
            "t_end": cfg.t_end,
            "min_rwa_margin": min(margins),
        },
    )
    result.metadata["g2_monotone_increasing"] = result.is_strictly_increasing("g2")
    return result


# ---------------------------------------------------------------------------
# Transmission spectrum


def _spectrum_point(args) -> dict[str, float]:
    (p_dict, delta, basis, window, steady_factor, cfg_dict) = args
    p = PhysicalParams(**{**p_dict, "delta": delta})
    dp = derive_params(p)
    h = add_atomic_decay(build_h_eit(dp, basis), dp)
    rates = [
        dp.k0 + p.gamma_r,
        dp.k1 + p.gamma_e,
        dp.k2 + p.gamma_e,
    ]
    positive = [r for r in rates if r > 0]
    cfg_base = IntegratorConfig(**cfg_dict)
    t_end = cfg_base.t_end
    if positive:
        t_end = min(t_end, steady_factor / min(positive))
    cfg = dataclasses.replace(
        cfg_base, t_end=t_end, output_stride=t_end / 512.0
    )
    traj = evolve_schrodinger(h, vacuum_state(basis), cfg)
    a = photon_annihilation(basis, dp)
    nph_series = traj.expectation_series(a.adjoint() @ a).real
    return {
        "photon_number": float(window_average(traj.times, nph_series, window)),
        "t_end": t_end,
    }


def transmission_spectrum(
    p: PhysicalParams,
    basis: Basis,
    delta_grid,
    cfg: IntegratorConfig,
    window: float = 0.5,
    steady_factor: float = 10.0,
    workers: int | None = None,
) -> SweepResult:
    """Quasi-steady cavity photon number versus drive detuning.

    Valid in the blockade-free, weak-drive regime: each point evolves the
    three driven polaritons to a quasi-steady state and window-averages
    the reconstructed photon number. The integration horizon per point is
    ``steady_factor`` over the slowest decay rate, capped at ``cfg.t_end``.
    Warns when the grid misses every polariton resonance.
    """
    delta_grid = np.asarray(delta_grid, dtype=float)
    if len(delta_grid) < 2:
        raise ValueError("delta grid needs at least two points")
    dp = derive_params(p)
    spacing = float(np.median(np.diff(np.sort(delta_grid))))
    if all(
        np.min(np.abs(delta_grid - e)) > spacing
        for e in (0.0, dp.e1, dp.e2)
    ):
        warnings.warn(
            "detuning grid does not cover any polariton resonance",
            stacklevel=2,
        )
    p_dict = dataclasses.asdict(p)
    cfg_dict = dataclasses.asdict(cfg)
    tasks = [
        (p_dict, float(d), basis, window, steady_factor, cfg_dict)
        for d in delta_grid
    ]
    rows = _parallel_map(
        _spectrum_point, tasks, _resolve_workers(workers, len(tasks))
    )
    return SweepResult(
        grid_name="delta",
        grid=delta_grid,
        columns={
            "photon_number": np.array([r["photon_number"] for r in rows]),
        },
        metadata={
            "window": window,
            "steady_factor": steady_factor,
            "horizon_cap": cfg.t_end,
            "per_point_t_end": [r["t_end"] for r in rows],
            "n_tot_max": basis.n_tot_max,
        },
    )


# ---------------------------------------------------------------------------
# Peak analysis


def find_local_maxima(grid, values) -> list[tuple[float, float]]:
    """Interior local maxima with three-point parabolic refinement.

    Returns (location, height) pairs ordered by location. Handles uneven
    grids by fitting the parabola through the three surrounding samples.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    peaks: list[tuple[float, float]] = []
    for i in range(1, len(grid) - 1):
        if values[i] > values[i - 1] and values[i] >= values[i + 1]:
            xs = grid[i - 1 : i + 2]
            ys = values[i - 1 : i + 2]
            a, b, c = np.polyfit(xs, ys, 2)
            if a < 0:
                x_pk = -b / (2 * a)
                if xs[0] <= x_pk <= xs[2]:
                    peaks.append((float(x_pk), float(np.polyval([a, b, c], x_pk))))
                    continue
            peaks.append((float(grid[i]), float(values[i])))
    return sorted(peaks)


def peak_fwhm(grid, values, peak_location: float) -> float:
    """Full width at half maximum around the sample nearest a peak.

    Half-maximum crossings are located by linear interpolation; NaN when
    either flank never drops below half maximum inside the grid.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    order = np.argsort(grid)
    grid, values = grid[order], values[order]
    i_pk = int(np.argmin(np.abs(grid - peak_location)))
    half = values[i_pk] / 2.0

    def cross(indices) -> float:
        prev = i_pk
        for j in indices:
            if values[j] <= half:
                x0, x1 = grid[j], grid[prev]
                y0, y1 = values[j], values[prev]
                if y1 == y0:
                    return float(x0)
                return float(x0 + (half - y0) * (x1 - x0) / (y1 - y0))
            prev = j
        return math.nan

    left = cross(range(i_pk - 1, -1, -1))
    right = cross(range(i_pk + 1, len(grid)))
    return float(right - left)
