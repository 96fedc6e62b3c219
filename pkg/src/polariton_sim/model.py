"""Physical parameters and closed-form derived quantities of the polariton transformation.

The mixing-angle cosine is the primary control knob; the control Rabi
frequency is derived from it through cos(theta) = Omega / sqrt(N g^2 + Omega^2).
All rates are plain numbers; interpret them in units of kappa (set kappa = 1)
or in 2*pi*MHz for lab-scale estimates. Every formula is homogeneous, so the
two conventions differ only in display labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "PhysicalParams",
    "DerivedParams",
    "derive_params",
    "feasibility_report",
    "FeasibilityReport",
]

#: Default ratio above which "much larger than" flags are granted.
DEFAULT_FLAG_THRESHOLD = 50.0


@dataclass(frozen=True)
class PhysicalParams:
    """Raw model inputs.

    Attributes:
        n_atoms: number of atoms in the ensemble (N >= 1).
        g: single-atom cavity coupling (angular frequency units).
        kappa: cavity field decay rate.
        gamma_e: excited-state decay rate.
        gamma_r: Rydberg-state decay rate.
        chi_bar: uniform blockade interaction strength.
        cos_theta: mixing-angle cosine, in (0, 1]. cos_theta = 1 is the
            bare-photon limit and requires g = 0.
        beta: drive field amplitude (dimensionless; multiplies sqrt(2 K)).
        delta: drive detuning from the bare cavity resonance.
    """

    n_atoms: int
    g: float
    kappa: float
    gamma_e: float
    gamma_r: float
    chi_bar: float
    cos_theta: float
    beta: float
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.n_atoms < 1:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        for name in ("g", "kappa", "gamma_e", "gamma_r", "chi_bar"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        if not 0.0 < self.cos_theta <= 1.0:
            raise ValueError(
                f"cos_theta must lie in (0, 1], got {self.cos_theta}"
            )
        # The mixing identity cos(theta) = Omega/sqrt(N g^2 + Omega^2) forces
        # cos_theta = 1 exactly when the collective coupling vanishes.
        if self.cos_theta == 1.0 and self.g > 0:
            raise ValueError("cos_theta = 1 requires g = 0 (bare-photon limit)")
        if self.g == 0 and self.cos_theta < 1.0:
            raise ValueError("g = 0 forces cos_theta = 1; got cos_theta < 1")


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived in closed form from :class:`PhysicalParams`.

    ``e1``/``e2`` are the bright-polariton energies, ``k0``/``k1``/``k2``
    the effective polariton decay rates through the mirrors,
    ``omega_drive_*`` the effective drive amplitudes, and
    ``lambda_blockade`` the dark-polariton pair-conversion strength.
    ``rwa_margin`` is e1 divided by the largest coupling it must dominate
    for the rotating-wave step to be trustworthy.
    """

    physical: PhysicalParams
    sin_theta: float
    control_rabi: float
    e1: float
    e2: float
    k0: float
    k1: float
    k2: float
    omega_drive_0: float
    omega_drive_1: float
    omega_drive_2: float
    lambda_blockade: float
    rwa_margin: float

    @property
    def cos_theta(self) -> float:
        return self.physical.cos_theta

    @property
    def bright_pair_coupling(self) -> float:
        """Pair-conversion coefficient for two like bright polaritons."""
        return self.physical.chi_bar * self.cos_theta**2 / 2.0

    @property
    def cross_pair_coupling(self) -> float:
        """Pair-conversion coefficient for one dark and one bright polariton."""
        return (
            self.physical.chi_bar
            * self.sin_theta
            * self.cos_theta
            / math.sqrt(2.0)
        )

    @property
    def omega_drive(self) -> tuple[float, float, float]:
        return (self.omega_drive_0, self.omega_drive_1, self.omega_drive_2)


def derive_params(p: PhysicalParams) -> DerivedParams:
    """Evaluate every derived quantity of the polariton transformation.

    The control Rabi frequency follows from the mixing identity, so the
    round trip cos_theta -> Omega -> cos_theta is exact to rounding.
    """
    c = p.cos_theta
    s = math.sqrt(1.0 - c * c)
    root_n_g = math.sqrt(p.n_atoms) * p.g
    if c == 1.0:
        # Bare-photon limit (g = 0): the control field decouples and the
        # mixing identity no longer determines Omega; take Omega = 0.
        control_rabi = 0.0
        e1 = 0.0
    else:
        control_rabi = root_n_g * c / s
        e1 = math.hypot(root_n_g, control_rabi)
    k0 = p.kappa * c * c
    k1 = k2 = p.kappa * s * s
    om0 = math.sqrt(2.0 * k0) * p.beta
    om1 = math.sqrt(2.0 * k1) * p.beta
    om2 = math.sqrt(2.0 * k2) * p.beta
    lam = p.chi_bar * s * s
    denom = max(
        p.chi_bar * c * c / 2.0,
        p.chi_bar * s * c / math.sqrt(2.0),
        abs(om0),
        abs(om1),
        abs(om2),
    )
    rwa_margin = math.inf if denom == 0.0 else e1 / denom
    return DerivedParams(
        physical=p,
        sin_theta=s,
        control_rabi=control_rabi,
        e1=e1,
        e2=-e1,
        k0=k0,
        k1=k1,
        k2=k2,
        omega_drive_0=om0,
        omega_drive_1=om1,
        omega_drive_2=om2,
        lambda_blockade=lam,
        rwa_margin=rwa_margin,
    )


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return math.inf if num > 0 else 0.0
    return num / den


@dataclass(frozen=True)
class FeasibilityReport:
    """Comparison quantities and pass/fail flags for a parameter set."""

    params: PhysicalParams
    derived: DerivedParams
    units: str
    threshold: float
    rows: tuple[tuple[str, float], ...] = field(default=())

    @property
    def lambda_over_k0(self) -> float:
        return _ratio(self.derived.lambda_blockade, self.derived.k0)

    @property
    def lambda_over_gamma_r(self) -> float:
        return _ratio(self.derived.lambda_blockade, self.params.gamma_r)

    @property
    def blockade_flag(self) -> bool:
        """True when the nonlinearity dominates both slow decoherence rates."""
        return (
            self.lambda_over_k0 >= self.threshold
            and self.lambda_over_gamma_r >= self.threshold
        )

    @property
    def rwa_flag(self) -> bool:
        return self.derived.rwa_margin >= self.threshold

    def format_table(self) -> str:
        """Render an aligned plain-text table."""
        unit = self.units
        lines = [f"{'quantity':<28}{'value':>16}  unit"]
        lines.append("-" * 54)
        for name, value in self.rows:
            is_ratio = name.endswith("margin") or "/" in name or name in (
                "n_atoms",
                "cos_theta",
                "sin_theta",
                "beta",
            )
            label = "" if is_ratio else unit
            lines.append(f"{name:<28}{value:>16.6g}  {label}")
        lines.append("-" * 54)
        lines.append(
            f"strong blockade (lambda >> K0, gamma_r): "
            f"{'pass' if self.blockade_flag else 'FAIL'}"
        )
        lines.append(
            f"rotating-wave condition (margin >= {self.threshold:g}): "
            f"{'pass' if self.rwa_flag else 'FAIL'}"
        )
        return "\n".join(lines)

    def csv_rows(self) -> list[tuple[str, float]]:
        return list(self.rows)


def feasibility_report(
    p: PhysicalParams,
    threshold: float = DEFAULT_FLAG_THRESHOLD,
    units: str = "kappa",
) -> FeasibilityReport:
    """Build the feasibility comparison table for a parameter set.

    ``units`` is a display label only ("kappa" or "2pi MHz"); it does not
    rescale any value. Flags are granted when the relevant ratio meets
    ``threshold``.
    """
    dp = derive_params(p)
    rows = (
        ("n_atoms", float(p.n_atoms)),
        ("g", p.g),
        ("kappa", p.kappa),
        ("gamma_e", p.gamma_e),
        ("gamma_r", p.gamma_r),
        ("chi_bar", p.chi_bar),
        ("cos_theta", p.cos_theta),
        ("sin_theta", dp.sin_theta),
        ("beta", p.beta),
        ("control_rabi", dp.control_rabi),
        ("e1", dp.e1),
        ("k0", dp.k0),
        ("k1", dp.k1),
        ("omega_drive_0", dp.omega_drive_0),
        ("omega_drive_1", dp.omega_drive_1),
        ("omega_drive_2", dp.omega_drive_2),
        ("lambda_blockade", dp.lambda_blockade),
        ("bright_pair_coupling", dp.bright_pair_coupling),
        ("cross_pair_coupling", dp.cross_pair_coupling),
        ("lambda/k0", _ratio(dp.lambda_blockade, dp.k0)),
        ("lambda/gamma_r", _ratio(dp.lambda_blockade, p.gamma_r)),
        ("rwa_margin", dp.rwa_margin),
    )
    return FeasibilityReport(
        params=p, derived=dp, units=units, threshold=threshold, rows=rows
    )
