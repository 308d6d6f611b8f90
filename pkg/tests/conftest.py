"""Pytest configuration and shared fixtures."""

import numpy as np
import pytest

from two_photon_cqed.logging import configure_logging
from two_photon_cqed.protocol import rydberg_params
from two_photon_cqed.types import PhysicalParams


@pytest.fixture(autouse=True)
def quiet_logging() -> None:
    """Keep library logs out of test output unless a test reconfigures them."""
    configure_logging(level="WARNING")


@pytest.fixture
def params() -> PhysicalParams:
    """g₁ = g₂ = 17.5 per μs, δ = 30g, angular."""
    return rydberg_params()


@pytest.fixture
def resonant() -> PhysicalParams:
    return PhysicalParams(g1=1.0, g2=1.0, delta=0.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)
