"""Interaction-picture Hamiltonians as sums of static operators with phase factors.

Every Hamiltonian is represented as

    H(t) = sum_k c_k * exp(i w_k t) * A_k  +  D,

where the term list excluding the anti-Hermitian decay operator D is closed
under Hermitian conjugation: each (c, w, A) comes with its partner
(conj(c), -w, A^dagger). D is diagonal with non-positive imaginary entries
and encodes per-mode decay at rate Gamma_m as -i(Gamma_m/2) n_m.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from polariton_sim.hilbert import (
    Basis,
    OperatorMatrix,
    annihilator,
    number_operator,
)
from polariton_sim.model import DEFAULT_FLAG_THRESHOLD, DerivedParams

__all__ = [
    "HamiltonianTerm",
    "HamiltonianTerms",
    "build_h_int",
    "build_h_eit",
    "build_h_rwa",
    "build_h_eff",
    "add_atomic_decay",
    "single_excitation_h1",
    "SingleExcitationResult",
]


@dataclass(frozen=True)
class HamiltonianTerm:
    coefficient: complex
    frequency: float
    operator: OperatorMatrix


@dataclass(frozen=True)
class HamiltonianTerms:
    """Time-dependent Hamiltonian over a basis plus a static decay operator."""

    terms: tuple[HamiltonianTerm, ...]
    decay: OperatorMatrix
    basis: Basis

    @property
    def dim(self) -> int:
        return self.basis.size

    def evaluate(self, t: float) -> np.ndarray:
        """Dense H(t) including the decay operator."""
        h = self.decay.toarray()
        for term in self.terms:
            h += term.coefficient * np.exp(1j * term.frequency * t) * (
                term.operator.toarray()
            )
        return h

    def hermitian_at(self, t: float) -> np.ndarray:
        """Dense H(t) - D (the Hermitian part at time t)."""
        return self.evaluate(t) - self.decay.toarray()

    def with_decay(self, decay: OperatorMatrix) -> "HamiltonianTerms":
        return HamiltonianTerms(terms=self.terms, decay=decay, basis=self.basis)

    def term_summary(self) -> str:
        """Debug dump: coefficient, frequency, nnz per term."""
        lines = [
            f"{k:3d}  c={term.coefficient:+.6g}  w={term.frequency:+.6g}  "
            f"nnz={term.operator.nnz}"
            for k, term in enumerate(self.terms)
        ]
        lines.append(f"  D  nnz={self.decay.nnz}")
        return "\n".join(lines)


def _pair_terms(
    entries: Iterable[tuple[complex, float, OperatorMatrix]],
) -> tuple[HamiltonianTerm, ...]:
    """Attach the Hermitian-conjugate partner to each term; drop zeros."""
    out: list[HamiltonianTerm] = []
    for c, w, op in entries:
        if c == 0:
            continue
        out.append(HamiltonianTerm(complex(c), float(w), op))
        out.append(
            HamiltonianTerm(complex(np.conj(c)), -float(w), op.adjoint())
        )
    return tuple(out)


def _decay_operator(basis: Basis, rates: dict[str, float]) -> OperatorMatrix:
    diag = np.zeros(basis.size, dtype=complex)
    for mode, rate in rates.items():
        diag += -0.5j * rate * basis.occupations(mode)
    return OperatorMatrix(basis.size, np.diag(diag))


def _drive_entries(dp: DerivedParams, basis: Basis):
    """Drive terms Omega_m b_m at frequency delta - E_m, for m = 0, 1, 2."""
    delta = dp.physical.delta
    energies = (0.0, dp.e1, dp.e2)
    amps = dp.omega_drive
    for mode, e_m, om in zip(("b0", "b1", "b2"), energies, amps):
        yield (om, delta - e_m, annihilator(basis, mode))


def _blockade_entries(dp: DerivedParams, basis: Basis):
    """The six pair-conversion terms with their interaction-picture phases.

    The dark-dark term is static (the dark polariton sits at zero energy)
    and so is the cross-bright term, because the two bright energies are
    opposite. The remaining phases carry e1 or 2 e1.
    """
    chi = dp.physical.chi_bar
    if chi == 0:
        return
    s, c = dp.sin_theta, dp.cos_theta
    e1, e2 = dp.e1, dp.e2
    b0 = annihilator(basis, "b0")
    b1 = annihilator(basis, "b1")
    b2 = annihilator(basis, "b2")
    p_dag = annihilator(basis, "p").adjoint()
    same = chi * c * c / 2.0
    cross = -chi * s * c / math.sqrt(2.0)
    yield (chi * s * s, 0.0, p_dag @ b0 @ b0)
    yield (same, -2.0 * e1, p_dag @ b1 @ b1)
    yield (same, -2.0 * e2, p_dag @ b2 @ b2)
    yield (cross, -e1, p_dag @ b1 @ b0)
    yield (cross, -e2, p_dag @ b2 @ b0)
    yield (same, -(e1 + e2), p_dag @ b2 @ b1)


def _mirror_decay_rates(dp: DerivedParams) -> dict[str, float]:
    return {"b0": dp.k0, "b1": dp.k1, "b2": dp.k2}


def build_h_int(dp: DerivedParams, basis: Basis) -> HamiltonianTerms:
    """Full interaction-picture Hamiltonian: blockade, drives, mirror decay.

    Six pair-conversion operators and three drive operators, each with its
    conjugate partner; zero-coefficient terms are omitted.
    """
    entries = list(_blockade_entries(dp, basis))
    entries.extend(_drive_entries(dp, basis))
    return HamiltonianTerms(
        terms=_pair_terms(entries),
        decay=_decay_operator(basis, _mirror_decay_rates(dp)),
        basis=basis,
    )


def build_h_eit(dp: DerivedParams, basis: Basis) -> HamiltonianTerms:
    """Conventional intracavity EIT: the blockade-free reduction.

    Three polariton drives plus mirror decay; each polariton is resonant
    when the drive detuning matches its energy.
    """
    return HamiltonianTerms(
        terms=_pair_terms(_drive_entries(dp, basis)),
        decay=_decay_operator(basis, _mirror_decay_rates(dp)),
        basis=basis,
    )


def build_h_rwa(
    dp: DerivedParams,
    basis: Basis,
    margin_threshold: float = DEFAULT_FLAG_THRESHOLD,
) -> HamiltonianTerms:
    """Rotating-wave Hamiltonian for a resonant dark-polariton drive.

    Keeps only the static dark-sector terms: the pair conversion at
    strength lambda and the dark drive, plus full mirror decay on all
    three polaritons. Assumes delta = 0; warns rather than fails when the
    bright-polariton energy does not dominate the dropped couplings.
    """
    if dp.physical.delta != 0.0:
        warnings.warn(
            "build_h_rwa assumes a resonant dark-polariton drive; "
            f"delta = {dp.physical.delta:g} is ignored",
            stacklevel=2,
        )
    if dp.rwa_margin < margin_threshold:
        warnings.warn(
            f"rotating-wave margin {dp.rwa_margin:.3g} is below "
            f"{margin_threshold:g}; dropped terms may matter",
            stacklevel=2,
        )
    b0 = annihilator(basis, "b0")
    p_dag = annihilator(basis, "p").adjoint()
    entries = [
        (dp.lambda_blockade, 0.0, p_dag @ b0 @ b0),
        (dp.omega_drive_0, 0.0, b0),
    ]
    return HamiltonianTerms(
        terms=_pair_terms(entries),
        decay=_decay_operator(basis, _mirror_decay_rates(dp)),
        basis=basis,
    )


def build_h_eff(
    dp: DerivedParams,
    basis: Basis,
    margin_threshold: float = DEFAULT_FLAG_THRESHOLD,
) -> HamiltonianTerms:
    """Effective blockade Hamiltonian: rotating-wave terms, dark decay only.

    The bright polaritons stay unexcited under a resonant dark drive, so
    their decay channels are dropped.
    """
    h = build_h_rwa(dp, basis, margin_threshold)
    return h.with_decay(_decay_operator(basis, {"b0": dp.k0}))


def add_atomic_decay(h: HamiltonianTerms, dp: DerivedParams) -> HamiltonianTerms:
    """Augment the decay operator with atomic spontaneous emission.

    The dark polariton inherits the Rydberg rate, both bright polaritons
    the excited-state rate.
    """
    p = dp.physical
    extra = _decay_operator(
        h.basis, {"b0": p.gamma_r, "b1": p.gamma_e, "b2": p.gamma_e}
    )
    return h.with_decay(h.decay + extra)


@dataclass(frozen=True)
class SingleExcitationResult:
    """Eigensystem of the single-excitation coupling matrix.

    The bare basis order is (photon, collective e, collective r2).
    Eigenvalues are sorted ascending; eigenvectors are the matching
    columns. ``dark_state`` is the zero-energy eigenvector with its first
    component made real positive.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dark_state(self) -> np.ndarray:
        k = int(np.argmin(np.abs(self.eigenvalues)))
        v = self.eigenvectors[:, k].copy()
        phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
        return v / phase


def single_excitation_h1(dp: DerivedParams) -> SingleExcitationResult:
    """Diagonalize the bare single-excitation Hamiltonian.

    Independent verification of the polariton transformation: the
    eigenvalues must be 0 and plus/minus the bright energy, and the
    zero-energy eigenvector must be (cos_theta, 0, -sin_theta).
    """
    root_n_g = dp.e1 * dp.sin_theta
    om = dp.control_rabi
    h = np.array(
        [
            [0.0, root_n_g, 0.0],
            [root_n_g, 0.0, om],
            [0.0, om, 0.0],
        ],
        dtype=complex,
    )
    vals, vecs = np.linalg.eigh(h)
    return SingleExcitationResult(matrix=h, eigenvalues=vals, eigenvectors=vecs)
