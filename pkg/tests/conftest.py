import numpy as np
import pytest

from polariton_sim import PhysicalParams


@pytest.fixture
def fig2_params() -> PhysicalParams:
    """Common strong-blockade operating point in cavity-decay units."""
    return PhysicalParams(
        n_atoms=600,
        g=3.0,
        kappa=1.0,
        gamma_e=1.0,
        gamma_r=0.001,
        chi_bar=2.0,
        cos_theta=0.04,
        beta=1.0,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
