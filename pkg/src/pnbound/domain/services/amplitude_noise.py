"""Residual amplitude noise caused by phase-estimation errors.

After derotation with imperfect estimates the useful amplitude of a sample is

    |y_n| = sqrt((2|s_n| cos(e_n) + Re{w'_n})^2 + Im{w'_n}^2)            exact
          ~ 2|s_n| cos(e_n) + Re{w'_n}                                     high SNR
          ~ 2|s_n| (1 - e_n^2 / 2) + Re{w'_n}                              small error
          = 2|s_n| - sigma2_eps_tilde q_n |s_n| + Re{w'_n},   q_n ~ chi2(1)

with e_n = (eps1_n - eps2_n) / 2 ~ N(0, sigma2_eps_tilde) and w'_n ~ CN(0, sigma2_w).
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import structlog

from ..entities.bim_result import BimResult
from .random_streams import AMPLITUDE_STREAM, SeedLike, make_rng
from .system_model import complex_noise

logger = structlog.get_logger()


@dataclass(frozen=True)
class AmplitudeModel:
    """Inputs of the residual amplitude-noise model for one symbol."""

    sigma2_eps_tilde: float
    symbol_mag: float
    sigma2_w: float

    def __post_init__(self) -> None:
        """Validate model values after creation."""
        if self.sigma2_eps_tilde < 0:
            raise ValueError(f"sigma2_eps_tilde must be >= 0 rad^2, got {self.sigma2_eps_tilde}")
        if self.symbol_mag < 0:
            raise ValueError(f"symbol_mag must be >= 0, got {self.symbol_mag}")
        if not self.sigma2_w > 0:
            raise ValueError(f"sigma2_w must be > 0, got {self.sigma2_w}")


@dataclass(frozen=True)
class AmplitudeStats:
    """Moments and sampler of the approximate received amplitude."""

    model: AmplitudeModel
    mean: float
    variance: float

    @property
    def phase_error_term_mean(self) -> float:
        """Mean of the chi-squared amplitude loss sigma2_eps_tilde q |s|."""
        return self.model.sigma2_eps_tilde * self.model.symbol_mag

    def sample(self, size: int, seed: SeedLike) -> np.ndarray:
        """Draw from 2|s| - sigma2_eps_tilde q |s| + Re{w'}."""
        rng = make_rng(seed)
        q = rng.chisquare(1.0, size=size)
        real_noise = rng.standard_normal(size) * math.sqrt(self.model.sigma2_w / 2.0)
        m = self.model
        return 2.0 * m.symbol_mag - m.sigma2_eps_tilde * q * m.symbol_mag + real_noise


@dataclass(frozen=True)
class ApproximationError:
    """Relative mean error of each amplitude approximation at one grid point."""

    snr_db: float
    sigma2_eps_tilde: float
    high_snr: float
    small_error: float
    combined: float
    exact_mean: float
    samples: int


def amplitude_stats(model: AmplitudeModel) -> AmplitudeStats:
    """Mean and variance of the approximate amplitude.

    mean = 2|s| - sigma2_eps_tilde |s| and
    variance = 2 sigma2_eps_tilde^2 |s|^2 + sigma2_w / 2.
    """
    mag = model.symbol_mag
    mean = 2.0 * mag - model.sigma2_eps_tilde * mag
    variance = 2.0 * model.sigma2_eps_tilde ** 2 * mag ** 2 + model.sigma2_w / 2.0
    return AmplitudeStats(model=model, mean=mean, variance=variance)


def _error_draws(model: AmplitudeModel, size: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    eps = rng.standard_normal(size) * math.sqrt(model.sigma2_eps_tilde)
    noise = complex_noise(size, model.sigma2_w, rng)
    return eps, noise


def exact_amplitude_samples(model: AmplitudeModel, size: int, seed: SeedLike) -> np.ndarray:
    """Samples of the exact amplitude sqrt((2|s| cos e + Re w')^2 + Im w'^2)."""
    rng = make_rng(seed)
    eps, noise = _error_draws(model, size, rng)
    return np.hypot(2.0 * model.symbol_mag * np.cos(eps) + noise.real, noise.imag)


def validate_approximations(
    sigma2_eps_tilde: float | Sequence[float],
    snr_grid: Sequence[float],
    symbol_mag: float = 1.0,
    samples: int = 200_000,
    seed: int = 0,
) -> list[ApproximationError]:
    """Relative mean error of the high-SNR and small-error approximations.

    Every approximation is evaluated on the same draws of (e, w') as the exact
    amplitude. The error metric is |mean(A_approx - A_exact)| / mean(A_exact).
    The noise variance at each SNR is |s|^2 / 10^(snr_db/10).

    Returns:
        One row per (SNR, sigma2_eps_tilde), SNR-major order
    """
    eps_grid = [sigma2_eps_tilde] if isinstance(sigma2_eps_tilde, (int, float)) else list(sigma2_eps_tilde)
    snrs = list(snr_grid)
    if not eps_grid or not snrs:
        raise ValueError("Both the SNR grid and the sigma2_eps_tilde grid must be nonempty")

    rows: list[ApproximationError] = []
    for snr_index, snr_db in enumerate(snrs):
        sigma2_w = symbol_mag ** 2 / 10.0 ** (snr_db / 10.0)
        for eps_index, s2 in enumerate(eps_grid):
            model = AmplitudeModel(sigma2_eps_tilde=s2, symbol_mag=symbol_mag, sigma2_w=sigma2_w)
            rng = make_rng(seed, AMPLITUDE_STREAM, snr_index, eps_index)
            eps, noise = _error_draws(model, samples, rng)

            two_s = 2.0 * symbol_mag
            quadratic = 1.0 - eps ** 2 / 2.0
            exact = np.hypot(two_s * np.cos(eps) + noise.real, noise.imag)
            high_snr = two_s * np.cos(eps) + noise.real
            small_error = np.hypot(two_s * quadratic + noise.real, noise.imag)
            combined = two_s * quadratic + noise.real

            exact_mean = float(np.mean(exact))
            rows.append(ApproximationError(
                snr_db=float(snr_db),
                sigma2_eps_tilde=float(s2),
                high_snr=abs(float(np.mean(high_snr - exact))) / exact_mean,
                small_error=abs(float(np.mean(small_error - exact))) / exact_mean,
                combined=abs(float(np.mean(combined - exact))) / exact_mean,
                exact_mean=exact_mean,
                samples=samples,
            ))

    logger.debug("Validated amplitude approximations", points=len(rows))
    return rows


def eps_tilde_from_bound(bim: BimResult) -> np.ndarray:
    """Per-symbol variance of the half-difference (eps1 - eps2) / 2 from B^-1."""
    values = (bim.mse_phi1 + bim.mse_phi2 - 2.0 * bim.cross_cov) / 4.0
    return np.maximum(values, 0.0)


def sample_phase_errors(bim: BimResult, symbol_index: int, size: int, seed: SeedLike) -> tuple[np.ndarray, np.ndarray]:
    """Jointly Gaussian (eps1, eps2) at one symbol with the bound covariance.

    Args:
        bim: Assembled bound
        symbol_index: 1-based symbol index
        size: Number of draws
        seed: Seed

    Returns:
        Arrays eps1, eps2 of shape (size,)
    """
    rng = make_rng(seed)
    draws = rng.multivariate_normal(np.zeros(2), bim.error_covariance(symbol_index), size=size, method="eigh")
    return draws[:, 0], draws[:, 1]
