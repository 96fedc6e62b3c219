"""Truncated Fock space over the three polariton modes and the Rydberg pair mode.

The pair mode stands in for the product of the two Rydberg sublevel
excitations created by a blockade conversion event; it is bosonized
(valid for many atoms and few excitations) and carries two excitation
quanta in the total-weight accounting, because each conversion trades two
polaritons for one pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse as sp

__all__ = [
    "MODES",
    "PAIR_WEIGHT",
    "DENSE_DIM_LIMIT",
    "BasisState",
    "Basis",
    "OperatorMatrix",
    "build_basis",
    "annihilator",
    "creator",
    "number_operator",
    "total_excitation_operator",
    "vacuum_state",
]

#: Mode names, in storage order: dark polariton, two bright polaritons, pair.
MODES = ("b0", "b1", "b2", "p")

#: Excitation quanta carried by one pair-mode occupation.
PAIR_WEIGHT = 2

#: Below this dimension operators are stored dense; above, CSR sparse.
DENSE_DIM_LIMIT = 64


@dataclass(frozen=True, order=True)
class BasisState:
    """Occupation numbers (n0, n1, n2, n_pair) of one Fock state."""

    n0: int
    n1: int
    n2: int
    n_pair: int

    @property
    def weight(self) -> int:
        """Total excitation quanta; the pair counts double."""
        return self.n0 + self.n1 + self.n2 + PAIR_WEIGHT * self.n_pair

    def occupation(self, mode: str) -> int:
        return getattr(self, _FIELD_BY_MODE[mode])

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n0, self.n1, self.n2, self.n_pair)


_FIELD_BY_MODE = {"b0": "n0", "b1": "n1", "b2": "n2", "p": "n_pair"}


class OperatorMatrix:
    """Complex operator over a :class:`Basis`.

    Dense ndarray storage below :data:`DENSE_DIM_LIMIT`, CSR sparse above.
    The model space is tiny in routine use; sparsity only pays off in
    convergence studies at raised truncation.
    """

    __slots__ = ("dim", "_mat")

    def __init__(self, dim: int, mat) -> None:
        self.dim = int(dim)
        if sp.issparse(mat):
            if self.dim < DENSE_DIM_LIMIT:
                self._mat = np.asarray(mat.todense(), dtype=complex)
            else:
                csr = mat.tocsr().astype(complex)
                csr.eliminate_zeros()
                self._mat = csr
        else:
            arr = np.asarray(mat, dtype=complex)
            if arr.shape != (self.dim, self.dim):
                raise ValueError(
                    f"matrix shape {arr.shape} != ({self.dim}, {self.dim})"
                )
            if self.dim < DENSE_DIM_LIMIT:
                self._mat = arr
            else:
                csr = sp.csr_matrix(arr)
                csr.eliminate_zeros()
                self._mat = csr

    @classmethod
    def from_entries(
        cls,
        dim: int,
        entries: Iterable[tuple[int, int, complex]],
    ) -> "OperatorMatrix":
        rows, cols, vals = [], [], []
        for r, c, v in entries:
            if v != 0:
                rows.append(r)
                cols.append(c)
                vals.append(v)
        mat = sp.coo_matrix(
            (np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim)
        )
        return cls(dim, mat)

    @property
    def is_dense(self) -> bool:
        return isinstance(self._mat, np.ndarray)

    def toarray(self) -> np.ndarray:
        if self.is_dense:
            return np.array(self._mat, copy=True)
        return np.asarray(self._mat.todense(), dtype=complex)

    def tocsr(self) -> sp.csr_matrix:
        if self.is_dense:
            return sp.csr_matrix(self._mat)
        return self._mat.copy()

    def dot(self, vec: np.ndarray) -> np.ndarray:
        return self._mat @ vec

    def adjoint(self) -> "OperatorMatrix":
        if self.is_dense:
            return OperatorMatrix(self.dim, self._mat.conj().T)
        return OperatorMatrix(self.dim, self._mat.getH())

    @property
    def nnz(self) -> int:
        if self.is_dense:
            return int(np.count_nonzero(self._mat))
        return int(self._mat.nnz)

    def diagonal(self) -> np.ndarray:
        if self.is_dense:
            return np.diagonal(self._mat).copy()
        return self._mat.diagonal()

    def coo_entries(self) -> list[tuple[int, int, complex]]:
        """Nonzero entries as (row, col, value), row-major order."""
        coo = sp.coo_matrix(self._mat)
        order = np.lexsort((coo.col, coo.row))
        return [
            (int(coo.row[k]), int(coo.col[k]), complex(coo.data[k]))
            for k in order
            if coo.data[k] != 0
        ]

    def export_coo_text(self) -> str:
        """Debug dump: one 'row col re im' line per nonzero entry."""
        lines = [
            f"{r} {c} {v.real:.17g} {v.imag:.17g}"
            for r, c, v in self.coo_entries()
        ]
        return "\n".join(lines)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.dim, self._mat @ other._mat)
        return self._mat @ other

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.dim, self._mat + other._mat)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.dim, self._mat - other._mat)

    def __mul__(self, scalar) -> "OperatorMatrix":
        return OperatorMatrix(self.dim, self._mat * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(self.dim, -self._mat)

    def __repr__(self) -> str:
        kind = "dense" if self.is_dense else "sparse"
        return f"OperatorMatrix(dim={self.dim}, nnz={self.nnz}, {kind})"


@dataclass(frozen=True)
class Basis:
    """Ordered truncated Fock basis with a state -> index bijection."""

    states: tuple[BasisState, ...]
    n_tot_max: int
    per_mode_caps: tuple[int, int, int, int]
    index: Mapping[BasisState, int]

    @property
    def size(self) -> int:
        return len(self.states)

    def index_of(self, state: BasisState | tuple[int, int, int, int]) -> int:
        if isinstance(state, tuple):
            state = BasisState(*state)
        return self.index[state]

    @property
    def vacuum_index(self) -> int:
        return self.index[BasisState(0, 0, 0, 0)]

    def occupations(self, mode: str) -> np.ndarray:
        """Occupation of ``mode`` for every state, in basis order."""
        fld = _FIELD_BY_MODE[mode]
        return np.array([getattr(s, fld) for s in self.states], dtype=float)


def build_basis(
    n_tot_max: int,
    per_mode_caps: Mapping[str, int] | None = None,
    hard_core_pair: bool = False,
) -> Basis:
    """Enumerate all states with weight <= n_tot_max under per-mode caps.

    Ordering is lexicographic on (n0, n1, n2, n_pair), so enumeration is
    deterministic and stable across runs. The vacuum is always included.

    Args:
        n_tot_max: total excitation weight cap (pair occupation counts
            double).
        per_mode_caps: optional occupation caps keyed by mode name.
        hard_core_pair: restrict the pair mode to at most one occupation.
    """
    if n_tot_max < 0:
        raise ValueError(f"n_tot_max must be >= 0, got {n_tot_max}")
    caps = [n_tot_max, n_tot_max, n_tot_max, n_tot_max // PAIR_WEIGHT]
    if per_mode_caps:
        for mode, cap in per_mode_caps.items():
            if mode not in MODES:
                raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
            if cap < 0:
                raise ValueError(f"cap for {mode!r} must be >= 0, got {cap}")
            caps[MODES.index(mode)] = min(caps[MODES.index(mode)], cap)
    if hard_core_pair:
        caps[3] = min(caps[3], 1)
    states = [
        BasisState(n0, n1, n2, npair)
        for n0, n1, n2, npair in itertools.product(
            *(range(c + 1) for c in caps)
        )
        if n0 + n1 + n2 + PAIR_WEIGHT * npair <= n_tot_max
    ]
    states.sort()
    index = {s: i for i, s in enumerate(states)}
    return Basis(
        states=tuple(states),
        n_tot_max=n_tot_max,
        per_mode_caps=tuple(caps),
        index=index,
    )


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def annihilator(basis: Basis, mode: str) -> OperatorMatrix:
    """Bosonic lowering operator: <n-1| b |n> = sqrt(n).

    Lowering never leaves the truncated space (caps are downward closed),
    so no matrix elements are lost here; the truncation bites only on the
    adjoint.
    """
    _check_mode(mode)
    fld = _FIELD_BY_MODE[mode]
    entries = []
    for i, s in enumerate(basis.states):
        n = getattr(s, fld)
        if n > 0:
            lowered = dict(zip(("n0", "n1", "n2", "n_pair"), s.as_tuple()))
            lowered[fld] = n - 1
            j = basis.index[BasisState(**lowered)]
            entries.append((j, i, complex(np.sqrt(n))))
    return OperatorMatrix.from_entries(basis.size, entries)


def creator(basis: Basis, mode: str) -> OperatorMatrix:
    """Bosonic raising operator, built directly (not by transposition).

    Raising out of the truncated space maps to zero.
    """
    _check_mode(mode)
    fld = _FIELD_BY_MODE[mode]
    entries = []
    for i, s in enumerate(basis.states):
        raised = dict(zip(("n0", "n1", "n2", "n_pair"), s.as_tuple()))
        raised[fld] = getattr(s, fld) + 1
        target = BasisState(**raised)
        j = basis.index.get(target)
        if j is not None:
            entries.append((j, i, complex(np.sqrt(raised[fld]))))
    return OperatorMatrix.from_entries(basis.size, entries)


def number_operator(basis: Basis, mode: str) -> OperatorMatrix:
    _check_mode(mode)
    return OperatorMatrix(basis.size, np.diag(basis.occupations(mode)))


def total_excitation_operator(basis: Basis) -> OperatorMatrix:
    """Diagonal total weight; the pair mode counts twice."""
    total = (
        basis.occupations("b0")
        + basis.occupations("b1")
        + basis.occupations("b2")
        + PAIR_WEIGHT * basis.occupations("p")
    )
    return OperatorMatrix(basis.size, np.diag(total))


def vacuum_state(basis: Basis) -> np.ndarray:
    psi = np.zeros(basis.size, dtype=complex)
    psi[basis.vacuum_index] = 1.0
    return psi
