"""Shared pytest configuration and fixtures."""

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("dev", max_examples=25, deadline=None)
settings.register_profile(
    "fast",
    max_examples=10,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture
def qpsk():
    """Unit-energy QPSK constellation."""
    from pnbound.domain.value_objects.constellation import make_constellation

    return make_constellation("QPSK")


@pytest.fixture
def small_spec():
    """Small, fast spec: QPSK, N=8, NDA and MBCRB, cheap Monte-Carlo budget."""
    from pnbound.application.dto.experiment_spec import parse_spec

    return parse_spec({
        "name": "small",
        "mode": ["NDA", "MBCRB"],
        "constellation": "QPSK",
        "n": 8,
        "snr_db": 10.0,
        "rho": 0.5,
        "sigma2_zeta": 1e-3,
        "report": 4,
        "nda_samples": 2000,
        "delta_grid": 16,
        "seed": 3,
    })
