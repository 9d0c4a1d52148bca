"""Unit tests for the residual amplitude-noise model."""

import numpy as np
import pytest

from pnbound.domain.services.amplitude_noise import (
    AmplitudeModel,
    amplitude_stats,
    eps_tilde_from_bound,
    exact_amplitude_samples,
    sample_phase_errors,
    validate_approximations,
)
from pnbound.domain.services.bcrb_engine import assemble_bim
from pnbound.domain.services.fisher_information import fisher_mbcrb
from pnbound.domain.services.pn_process import build_covariance
from pnbound.domain.value_objects.constellation import make_constellation
from pnbound.domain.value_objects.pn_config import PnConfig


class TestAmplitudeStats:
    """Unit tests for amplitude_stats."""

    def test_no_phase_error(self) -> None:
        """Test sigma2_eps_tilde = 0 leaves mean 2|s| and variance sigma2_w / 2."""
        stats = amplitude_stats(AmplitudeModel(sigma2_eps_tilde=0.0, symbol_mag=1.0, sigma2_w=0.01))
        assert stats.mean == pytest.approx(2.0)
        assert stats.variance == pytest.approx(0.005)

    def test_small_error_example(self) -> None:
        """Test the moments for sigma2_eps_tilde = 1e-3, |s| = 1, sigma2_w = 1e-3."""
        stats = amplitude_stats(AmplitudeModel(sigma2_eps_tilde=1e-3, symbol_mag=1.0, sigma2_w=1e-3))
        assert stats.mean == pytest.approx(1.999)
        assert stats.variance == pytest.approx(2e-6 + 5e-4)
        assert stats.phase_error_term_mean == pytest.approx(1e-3)

    def test_sampler_matches_moments(self) -> None:
        """Test the approximate sampler reproduces its own mean and variance."""
        stats = amplitude_stats(AmplitudeModel(sigma2_eps_tilde=1e-2, symbol_mag=1.0, sigma2_w=1e-2))
        samples = stats.sample(500_000, seed=1)
        assert np.mean(samples) == pytest.approx(stats.mean, rel=1e-3)
        assert np.var(samples) == pytest.approx(stats.variance, rel=0.02)

    @pytest.mark.parametrize(
        "kwargs,match",
        [
            ({"sigma2_eps_tilde": -1.0, "symbol_mag": 1.0, "sigma2_w": 0.1}, "sigma2_eps_tilde"),
            ({"sigma2_eps_tilde": 0.0, "symbol_mag": -1.0, "sigma2_w": 0.1}, "symbol_mag"),
            ({"sigma2_eps_tilde": 0.0, "symbol_mag": 1.0, "sigma2_w": 0.0}, "sigma2_w"),
        ],
    )
    def test_invalid_model(self, kwargs: dict, match: str) -> None:
        """Test invalid model values are rejected."""
        with pytest.raises(ValueError, match=match):
            AmplitudeModel(**kwargs)


class TestExactAmplitude:
    """Monte-Carlo checks of the closed-form moments against the exact amplitude."""

    def test_exact_moments_at_high_snr(self) -> None:
        """Test mean within 0.2% and variance within 5% at 30 dB."""
        model = AmplitudeModel(sigma2_eps_tilde=1e-2, symbol_mag=1.0, sigma2_w=1e-3)
        stats = amplitude_stats(model)
        exact = exact_amplitude_samples(model, 1_000_000, seed=3)
        assert np.mean(exact) == pytest.approx(stats.mean, rel=2e-3)
        assert np.var(exact) == pytest.approx(stats.variance, rel=0.05)

    def test_combined_approximation_is_tight_at_high_snr(self) -> None:
        """Test the combined approximation error is below 1e-3 at 40 dB."""
        (row,) = validate_approximations(1e-4, [40.0], samples=100_000, seed=0)
        assert row.combined < 1e-3
        assert row.samples == 100_000

    def test_high_snr_approximation_degrades_at_low_snr(self) -> None:
        """Test the high-SNR approximation is worse at 0 dB than at 30 dB."""
        low, high = validate_approximations(1e-3, [0.0, 30.0], samples=100_000, seed=2)
        assert low.snr_db == 0.0
        assert low.high_snr > high.high_snr

    def test_rows_are_snr_major(self) -> None:
        """Test one row per grid point in SNR-major order."""
        rows = validate_approximations([1e-4, 1e-2], [10.0, 20.0], samples=2000)
        assert [(r.snr_db, r.sigma2_eps_tilde) for r in rows] == [
            (10.0, 1e-4), (10.0, 1e-2), (20.0, 1e-4), (20.0, 1e-2),
        ]

    def test_empty_grid_raises(self) -> None:
        """Test an empty SNR grid is rejected."""
        with pytest.raises(ValueError, match="nonempty"):
            validate_approximations(1e-3, [])


class TestBoundCoupling:
    """Unit tests for eps_tilde_from_bound and sample_phase_errors."""

    def test_eps_tilde_from_covariance(self) -> None:
        """Test var1 = var2 = 4e-3, cov = 2e-3 gives sigma2_eps_tilde = 1e-3."""
        bim = assemble_bim(
            fisher_mbcrb(make_constellation("QPSK"), 0.1),
            build_covariance(PnConfig(sigma2_zeta=1e-3, rho=0.5, n=4)),
        )
        patched = type(bim)(
            bim=bim.bim,
            bim_inv=bim.bim_inv,
            mse_phi1=np.full(4, 4e-3),
            mse_phi2=np.full(4, 4e-3),
            cross_cov=np.full(4, 2e-3),
            sigma2_eps_tilde=bim.sigma2_eps_tilde,
            mode=bim.mode,
        )
        assert np.allclose(eps_tilde_from_bound(patched), 1e-3)

    def test_sampled_half_difference_variance(self) -> None:
        """Test the sampled (eps1 - eps2) / 2 matches sigma2_eps_tilde within 2%."""
        bim = assemble_bim(
            fisher_mbcrb(make_constellation("QPSK"), 0.1),
            build_covariance(PnConfig(sigma2_zeta=1e-3, rho=0.5, n=10)),
        )
        eps1, eps2 = sample_phase_errors(bim, 5, 1_000_000, seed=8)
        half_difference = (eps1 - eps2) / 2
        assert np.var(half_difference) == pytest.approx(bim.sigma2_eps_tilde[4], rel=0.02)
