"""Integration of the driven non-Hermitian Schrodinger equation and a Lindblad oracle.

The Schrodinger path evolves raw (unnormalized) state vectors; expectation
values are taken on the normalized state, which conditions on no quantum
jump having occurred. The Lindblad path is the jump-inclusive cross-check:
each -i(Gamma/2) n_m term of the decay operator becomes a standard
dissipator with jump operator sqrt(Gamma) b_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp

from polariton_sim.hamiltonian import HamiltonianTerms
from polariton_sim.hilbert import (
    DENSE_DIM_LIMIT,
    MODES,
    BasisState,
    OperatorMatrix,
    annihilator,
)

__all__ = [
    "IntegratorConfig",
    "IntegrationError",
    "Trajectory",
    "DensityTrajectory",
    "evolve_schrodinger",
    "evolve_lindblad",
    "collapse_rates",
    "window_average",
    "steady_window_stats",
]

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


def _window_start(times: np.ndarray, fraction: float) -> int:
    if not 0 < fraction <= 1:
        raise ValueError(f"window fraction must be in (0, 1], got {fraction}")
    t0 = times[-1] - fraction * (times[-1] - times[0])
    start = int(np.searchsorted(times, t0))
    if start >= len(times) - 1:
        raise ValueError("window is empty at this output stride")
    return start


class IntegrationError(RuntimeError):
    """Raised when the adaptive integrator fails or produces non-finite values."""

    def __init__(self, message: str, t: float | None = None) -> None:
        if t is not None:
            message = f"{message} (at t = {t:.6g})"
        super().__init__(message)
        self.t = t


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive integration settings; times are in units of 1/kappa."""

    t_start: float = 0.0
    t_end: float = 500.0
    output_stride: float = 0.5
    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = math.inf

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            raise ValueError(
                f"t_end ({self.t_end}) must exceed t_start ({self.t_start})"
            )
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if self.output_stride <= 0:
            raise ValueError("output_stride must be positive")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")

    def output_times(self) -> np.ndarray:
        span = self.t_end - self.t_start
        n_steps = max(1, round(span / self.output_stride))
        return np.linspace(self.t_start, self.t_end, n_steps + 1)


@dataclass
class Trajectory:
    """Raw state vectors on the output grid of one Schrodinger evolution."""

    times: np.ndarray
    states: np.ndarray  # (n_times, dim) complex, unnormalized

    @property
    def norms(self) -> np.ndarray:
        return np.sqrt(np.einsum("ti,ti->t", self.states.conj(), self.states).real)

    def window_slice(self, fraction: float) -> slice:
        """Index slice covering the final ``fraction`` of the time span."""
        return slice(_window_start(self.times, fraction), len(self.times))

    def expectation_series(self, op: OperatorMatrix) -> np.ndarray:
        """Normalized expectation <psi|O|psi>/<psi|psi> at each output time."""
        mat = op.toarray()
        num = np.einsum("ti,ij,tj->t", self.states.conj(), mat, self.states)
        den = np.einsum("ti,ti->t", self.states.conj(), self.states).real
        if np.any(den <= 0):
            raise ValueError("cannot normalize a zero-norm state")
        return num / den


@dataclass
class DensityTrajectory:
    """Density matrices on the output grid of one Lindblad evolution."""

    times: np.ndarray
    rhos: np.ndarray  # (n_times, dim, dim) complex

    @property
    def traces(self) -> np.ndarray:
        return np.einsum("tii->t", self.rhos).real

    def window_slice(self, fraction: float) -> slice:
        return slice(_window_start(self.times, fraction), len(self.times))

    def expectation_series(self, op: OperatorMatrix) -> np.ndarray:
        return np.einsum("tij,ji->t", self.rhos, op.toarray())


def _compile_rhs(h: HamiltonianTerms):
    """Return f(t, psi) = -i H(t) psi with the term sum precompiled."""
    dim = h.dim
    dvec = h.decay.diagonal()
    coeffs = np.array([t.coefficient for t in h.terms], dtype=complex)
    freqs = np.array([t.frequency for t in h.terms], dtype=float)
    n_terms = len(h.terms)
    if n_terms == 0:
        def rhs(t, y):
            return -1j * (dvec * y)
        return rhs
    if dim < DENSE_DIM_LIMIT:
        stacked = np.stack([t.operator.toarray() for t in h.terms])
        flat = np.ascontiguousarray(stacked.reshape(n_terms * dim, dim))

        def rhs(t, y):
            prod = (flat @ y).reshape(n_terms, dim)
            phases = coeffs * np.exp(1j * freqs * t)
            return -1j * (phases @ prod + dvec * y)

        return rhs

    # One block-stacked sparse matvec per call instead of a per-term loop.
    block = sp.vstack([t.operator.tocsr() for t in h.terms]).tocsr()

    def rhs(t, y):
        prod = (block @ y).reshape(n_terms, dim)
        phases = coeffs * np.exp(1j * freqs * t)
        return -1j * (phases @ prod + dvec * y)

    return rhs


def _run_ivp(rhs, y0: np.ndarray, cfg: IntegratorConfig) -> tuple[np.ndarray, np.ndarray]:
    sol = solve_ivp(
        rhs,
        (cfg.t_start, cfg.t_end),
        y0,
        method="DOP853",
        t_eval=cfg.output_times(),
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
    )
    if not sol.success:
        t_fail = float(sol.t[-1]) if len(sol.t) else cfg.t_start
        raise IntegrationError(f"integrator failed: {sol.message}", t=t_fail)
    y = sol.y.T
    finite = np.isfinite(y.real) & np.isfinite(y.imag)
    if not finite.all():
        bad = np.where(~finite.all(axis=1))[0]
        t_bad = float(sol.t[bad[0]]) if len(bad) else cfg.t_end
        raise IntegrationError("non-finite amplitudes in solution", t=t_bad)
    return sol.t, y


def evolve_schrodinger(
    h: HamiltonianTerms, psi0: np.ndarray, cfg: IntegratorConfig
) -> Trajectory:
    """Integrate i d(psi)/dt = H(t) psi with embedded adaptive error control.

    ``psi0`` must be normalized; the returned states are raw, so their
    norms record the accumulated no-jump survival amplitude.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (h.dim,):
        raise ValueError(f"psi0 has shape {psi0.shape}, expected ({h.dim},)")
    if not math.isclose(float(np.linalg.norm(psi0)), 1.0, rel_tol=1e-9):
        raise ValueError("psi0 must be normalized")
    times, states = _run_ivp(_compile_rhs(h), psi0, cfg)
    return Trajectory(times=times, states=states)


def collapse_rates(h: HamiltonianTerms) -> dict[str, float]:
    """Read per-mode decay rates off the diagonal structure of D.

    D must equal -i/2 * sum_m Gamma_m n_m over the basis; the rates are
    recovered from the singly occupied states and the full diagonal is
    checked against the reconstruction.
    """
    diag = h.decay.diagonal()
    if np.abs(diag.real).max(initial=0.0) > 1e-12:
        raise ValueError("decay operator has a real diagonal part")
    basis = h.basis
    rates: dict[str, float] = {}
    occupations = {}
    for k, mode in enumerate(MODES):
        occ = basis.occupations(mode)
        occupations[mode] = occ
        unit = tuple(1 if j == k else 0 for j in range(4))
        idx = basis.index.get(BasisState(*unit))
        if idx is None:
            rates[mode] = 0.0
            continue
        rate = -2.0 * diag[idx].imag
        rates[mode] = 0.0 if abs(rate) < 1e-15 else rate
        if rate < -1e-12:
            raise ValueError(f"negative decay rate {rate:g} for mode {mode}")
    recon = sum(-0.5j * rates[m] * occupations[m] for m in MODES)
    if not np.allclose(recon, diag, atol=1e-10):
        raise ValueError(
            "decay diagonal is not a per-mode number-operator combination"
        )
    return rates


def evolve_lindblad(
    h: HamiltonianTerms,
    rho0: np.ndarray,
    cfg: IntegratorConfig,
    positivity_tol: float = 1e-8,
) -> DensityTrajectory:
    """Trace-preserving master-equation evolution as a verification oracle.

    The Hermitian part is taken from the term list of ``h``; every decay
    channel of D becomes a dissipator with jump operator sqrt(Gamma) b_m.
    Raises when an output density matrix develops an eigenvalue below
    ``-positivity_tol``, which signals a too-loose integrator tolerance.
    """
    dim = h.dim
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise ValueError(f"rho0 has shape {rho0.shape}, expected ({dim}, {dim})")
    if not np.allclose(rho0, rho0.conj().T, atol=1e-12):
        raise ValueError("rho0 must be Hermitian")
    if not math.isclose(float(np.trace(rho0).real), 1.0, rel_tol=1e-9):
        raise ValueError("rho0 must have unit trace")

    coeffs = np.array([t.coefficient for t in h.terms], dtype=complex)
    freqs = np.array([t.frequency for t in h.terms], dtype=float)
    ops = [t.operator.toarray() for t in h.terms]
    stacked = np.stack(ops) if ops else np.zeros((0, dim, dim), complex)

    rates = collapse_rates(h)
    jumps = []
    for mode, rate in rates.items():
        if rate > 0:
            jumps.append(np.sqrt(rate) * annihilator(h.basis, mode).toarray())
    jump_dags = [j.conj().T for j in jumps]
    anticomm = [jd @ j for j, jd in zip(jumps, jump_dags)]

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        if len(coeffs):
            phases = coeffs * np.exp(1j * freqs * t)
            ham = np.tensordot(phases, stacked, axes=1)
            out = -1j * (ham @ rho - rho @ ham)
        else:
            out = np.zeros_like(rho)
        for j, jd, m in zip(jumps, jump_dags, anticomm):
            out += j @ rho @ jd - 0.5 * (m @ rho + rho @ m)
        return out.reshape(-1)

    times, flat = _run_ivp(rhs, rho0.reshape(-1), cfg)
    rhos = flat.reshape(len(times), dim, dim)

    traces = np.einsum("tii->t", rhos).real
    worst = float(np.abs(traces - 1.0).max())
    if worst > 1e-8:
        raise IntegrationError(
            f"trace deviated from 1 by {worst:.3g}; tighten tolerances"
        )
    for k in range(len(times)):
        sym = 0.5 * (rhos[k] + rhos[k].conj().T)
        min_eig = float(np.linalg.eigvalsh(sym).min())
        if min_eig < -positivity_tol:
            raise IntegrationError(
                f"density matrix eigenvalue {min_eig:.3g} below "
                f"-{positivity_tol:g}; tighten tolerances",
                t=float(times[k]),
            )
    return DensityTrajectory(times=times, rhos=rhos)


def window_average(times: np.ndarray, values: np.ndarray, fraction: float = 0.5):
    """Continuous time average of a sampled series over its final fraction."""
    start = _window_start(times, fraction)
    span = times[-1] - times[start]
    return _trapezoid(values[start:], times[start:]) / span


def steady_window_stats(
    traj,
    window_fraction: float = 0.5,
    observables: dict[str, OperatorMatrix] | None = None,
) -> dict[str, complex]:
    """Time averages of normalized expectations over the final window.

    Works on either trajectory flavour. The trajectory must be long enough
    for the window to exclude the initial transient; that is the caller's
    responsibility.
    """
    observables = observables or {}
    out: dict[str, complex] = {}
    for name, op in observables.items():
        series = traj.expectation_series(op)
        out[name] = window_average(traj.times, series, window_fraction)
    return out
