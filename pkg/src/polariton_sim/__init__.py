"""Simulator for photon blockade of cavity dark-state polaritons in a blockaded Rydberg ensemble.

The package builds the three polariton modes of intracavity EIT plus a
bosonized Rydberg pair mode on a truncated Fock space, assembles the
driven non-Hermitian Hamiltonians in the interaction picture, integrates
the dynamics, and extracts populations, second-order correlations, and
transmission spectra.
"""

from polariton_sim.model import (
    PhysicalParams,
    DerivedParams,
    derive_params,
    feasibility_report,
    FeasibilityReport,
)
from polariton_sim.hilbert import (
    MODES,
    BasisState,
    Basis,
    OperatorMatrix,
    build_basis,
    annihilator,
    creator,
    number_operator,
    total_excitation_operator,
    vacuum_state,
)
from polariton_sim.hamiltonian import (
    HamiltonianTerm,
    HamiltonianTerms,
    build_h_int,
    build_h_eit,
    build_h_rwa,
    build_h_eff,
    add_atomic_decay,
    single_excitation_h1,
    SingleExcitationResult,
)
from polariton_sim.dynamics import (
    IntegratorConfig,
    IntegrationError,
    Trajectory,
    DensityTrajectory,
    evolve_schrodinger,
    evolve_lindblad,
    collapse_rates,
    steady_window_stats,
    window_average,
)
from polariton_sim.observables import (
    SweepResult,
    expectation,
    g2_zero,
    population_series,
    photon_annihilation,
    transmission_spectrum,
    sweep_costheta,
    find_local_maxima,
    peak_fwhm,
)

__version__ = "0.1.0"

__all__ = [
    "PhysicalParams",
    "DerivedParams",
    "derive_params",
    "feasibility_report",
    "FeasibilityReport",
    "MODES",
    "BasisState",
    "Basis",
    "OperatorMatrix",
    "build_basis",
    "annihilator",
    "creator",
    "number_operator",
    "total_excitation_operator",
    "vacuum_state",
    "HamiltonianTerm",
    "HamiltonianTerms",
    "build_h_int",
    "build_h_eit",
    "build_h_rwa",
    "build_h_eff",
    "add_atomic_decay",
    "single_excitation_h1",
    "SingleExcitationResult",
    "IntegratorConfig",
    "IntegrationError",
    "Trajectory",
    "DensityTrajectory",
    "evolve_schrodinger",
    "evolve_lindblad",
    "collapse_rates",
    "steady_window_stats",
    "window_average",
    "SweepResult",
    "expectation",
    "g2_zero",
    "population_series",
    "photon_annihilation",
    "transmission_spectrum",
    "sweep_costheta",
    "find_local_maxima",
    "peak_fwhm",
    "__version__",
]
