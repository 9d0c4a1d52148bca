"""Unit tests for the per-sample likelihood and its derivatives."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from pnbound.domain.enums import EstimationMode
from pnbound.domain.services.likelihood import (
    SampleLikelihoodContext,
    da_terms,
    loglik_da,
    loglik_derivs,
    loglik_nda,
    nda_terms,
)
from pnbound.domain.value_objects.constellation import make_constellation

SIGMA2_W = 0.1
STEP = 1e-5

phases = st.floats(min_value=-math.pi, max_value=math.pi)


def _loglik(ctx: SampleLikelihoodContext, mode: EstimationMode, phi1: float, phi2: float) -> float:
    return loglik_da(ctx, phi1, phi2) if mode is EstimationMode.DA else loglik_nda(ctx, phi1, phi2)


def _context(phi1: float, phi2: float) -> SampleLikelihoodContext:
    qpsk = make_constellation("QPSK")
    s = qpsk.points[1]
    y = s * (np.exp(1j * phi1) + np.exp(1j * phi2)) + 0.2 - 0.1j
    return SampleLikelihoodContext(y_n=complex(y), sigma2_w=SIGMA2_W, s_n=complex(s), constellation=qpsk)


class TestLikelihoodValues:
    """Unit tests for loglik_da and loglik_nda."""

    def test_da_at_zero_residual(self) -> None:
        """Test the DA log-density at the mean is -log(pi sigma2_w)."""
        ctx = SampleLikelihoodContext(y_n=2 + 0j, sigma2_w=SIGMA2_W, s_n=1 + 0j)
        assert loglik_da(ctx, 0.0, 0.0) == pytest.approx(-math.log(math.pi * SIGMA2_W))

    def test_nda_single_symbol_equals_da(self) -> None:
        """Test a one-symbol mixture reduces to the data-aided density."""
        ctx = SampleLikelihoodContext(
            y_n=0.3 + 1.1j,
            sigma2_w=SIGMA2_W,
            s_n=1 + 0j,
            constellation=make_constellation([1 + 0j]),
        )
        assert loglik_nda(ctx, 0.4, -0.2) == pytest.approx(loglik_da(ctx, 0.4, -0.2), abs=1e-12)

    def test_nda_is_stable_at_high_snr(self) -> None:
        """Test log-sum-exp keeps the NDA density finite far from every symbol."""
        ctx = SampleLikelihoodContext(y_n=50 + 50j, sigma2_w=1e-5, constellation=make_constellation("16QAM"))
        assert math.isfinite(loglik_nda(ctx, 0.0, 0.0))

    def test_missing_symbol_raises(self) -> None:
        """Test DA evaluation without a symbol is rejected."""
        ctx = SampleLikelihoodContext(y_n=1 + 0j, sigma2_w=SIGMA2_W)
        with pytest.raises(ValueError, match="transmitted symbol"):
            loglik_da(ctx, 0.0, 0.0)

    def test_missing_constellation_raises(self) -> None:
        """Test NDA evaluation without a constellation is rejected."""
        ctx = SampleLikelihoodContext(y_n=1 + 0j, sigma2_w=SIGMA2_W, s_n=1 + 0j)
        with pytest.raises(ValueError, match="constellation"):
            loglik_nda(ctx, 0.0, 0.0)

    def test_noise_variance_must_be_positive(self) -> None:
        """Test sigma2_w <= 0 is rejected."""
        with pytest.raises(ValueError, match="sigma2_w"):
            SampleLikelihoodContext(y_n=1 + 0j, sigma2_w=0.0)

    def test_common_rotation_invariance(self) -> None:
        """Test rotating y and both phases together leaves the NDA density unchanged."""
        qpsk = make_constellation("QPSK")
        ctx = SampleLikelihoodContext(y_n=0.7 - 0.4j, sigma2_w=SIGMA2_W, constellation=qpsk)
        rotated = SampleLikelihoodContext(
            y_n=complex((0.7 - 0.4j) * np.exp(0.9j)), sigma2_w=SIGMA2_W, constellation=qpsk
        )
        assert loglik_nda(rotated, 0.3 + 0.9, -0.5 + 0.9) == pytest.approx(loglik_nda(ctx, 0.3, -0.5), abs=1e-10)


class TestLikelihoodSymmetries:
    """Normalization, symmetries and a direct mixture-density oracle."""

    @pytest.mark.parametrize("mode", [EstimationMode.DA, EstimationMode.NDA])
    def test_density_integrates_to_one(self, mode: EstimationMode) -> None:
        """Test the double integral of exp(loglik) over the y plane is 1 within 1e-4."""
        qpsk = make_constellation("QPSK")
        axis = np.linspace(-6.0, 6.0, 1201)
        y = axis[:, None] + 1j * axis[None, :]
        if mode is EstimationMode.DA:
            loglik = da_terms(y, qpsk.points[2], 0.3, -0.7, 0.5).loglik
        else:
            loglik = nda_terms(y, qpsk.points, 0.3, -0.7, 0.5).loglik
        total = trapezoid(trapezoid(np.exp(loglik), axis, axis=1), axis)
        assert total == pytest.approx(1.0, abs=1e-4)

    @pytest.mark.parametrize("mode", [EstimationMode.DA, EstimationMode.NDA])
    @given(phi1=phases, phi2=phases)
    def test_swapping_paths(self, mode: EstimationMode, phi1: float, phi2: float) -> None:
        """Test loglik(phi1, phi2) = loglik(phi2, phi1) with equal channel gains."""
        ctx = _context(0.4, 1.1)
        assert _loglik(ctx, mode, phi1, phi2) == pytest.approx(_loglik(ctx, mode, phi2, phi1), abs=1e-10)

    @given(phi1=phases, phi2=phases)
    def test_bpsk_sign_symmetry(self, phi1: float, phi2: float) -> None:
        """Test shifting both phases by pi leaves the BPSK mixture density unchanged."""
        for y_n in (0j, 0.8 - 0.3j):
            ctx = SampleLikelihoodContext(y_n=y_n, sigma2_w=SIGMA2_W, constellation=make_constellation("BPSK"))
            shifted = loglik_nda(ctx, phi1 + math.pi, phi2 + math.pi)
            assert shifted == pytest.approx(loglik_nda(ctx, phi1, phi2), abs=1e-10)

    @pytest.mark.parametrize("label", ["QPSK", "16QAM"])
    def test_nda_matches_explicit_mixture(self, label: str) -> None:
        """Test loglik_nda against log mean_k of the complex Gaussian densities."""
        constellation = make_constellation(label)
        phi1, phi2, y_n = 0.25, -0.4, 0.9 + 0.35j
        means = constellation.points * (np.exp(1j * phi1) + np.exp(1j * phi2))
        densities = np.exp(-np.abs(y_n - means) ** 2 / SIGMA2_W) / (np.pi * SIGMA2_W)
        expected = math.log(float(np.mean(densities)))

        ctx = SampleLikelihoodContext(y_n=y_n, sigma2_w=SIGMA2_W, constellation=constellation)
        assert loglik_nda(ctx, phi1, phi2) == pytest.approx(expected, abs=1e-10)


class TestLikelihoodDerivatives:
    """Analytic derivatives against central finite differences."""

    @pytest.mark.parametrize("mode", [EstimationMode.DA, EstimationMode.NDA])
    @given(phi1=phases, phi2=phases)
    def test_gradient_matches_finite_differences(self, mode: EstimationMode, phi1: float, phi2: float) -> None:
        """Test the gradient within 1e-6 relative."""
        ctx = _context(0.2, -0.6)
        gradient, _ = loglik_derivs(ctx, phi1, phi2, mode)

        numeric = np.array([
            (_loglik(ctx, mode, phi1 + STEP, phi2) - _loglik(ctx, mode, phi1 - STEP, phi2)) / (2 * STEP),
            (_loglik(ctx, mode, phi1, phi2 + STEP) - _loglik(ctx, mode, phi1, phi2 - STEP)) / (2 * STEP),
        ])
        scale = max(1.0, float(np.max(np.abs(gradient))))
        assert np.max(np.abs(gradient - numeric)) / scale < 1e-6

    @pytest.mark.parametrize("mode", [EstimationMode.DA, EstimationMode.NDA])
    @given(phi1=phases, phi2=phases)
    def test_hessian_matches_finite_differences(self, mode: EstimationMode, phi1: float, phi2: float) -> None:
        """Test the Hessian against differences of the analytic gradient within 1e-4 relative."""
        ctx = _context(0.2, -0.6)
        _, hessian = loglik_derivs(ctx, phi1, phi2, mode)

        numeric = np.empty((2, 2))
        for j, (d1, d2) in enumerate(((STEP, 0.0), (0.0, STEP))):
            plus, _ = loglik_derivs(ctx, phi1 + d1, phi2 + d2, mode)
            minus, _ = loglik_derivs(ctx, phi1 - d1, phi2 - d2, mode)
            numeric[:, j] = (plus - minus) / (2 * STEP)

        scale = max(1.0, float(np.max(np.abs(hessian))))
        assert np.max(np.abs(hessian - numeric)) / scale < 1e-4
        assert hessian[0, 1] == hessian[1, 0]

    def test_mbcrb_has_no_likelihood(self) -> None:
        """Test MBCRB derivatives are rejected."""
        with pytest.raises(ValueError, match="DA and NDA"):
            loglik_derivs(_context(0.0, 0.0), 0.0, 0.0, EstimationMode.MBCRB)

    def test_vectorized_terms_match_scalar(self) -> None:
        """Test the vectorized NDA terms agree with scalar evaluation."""
        qpsk = make_constellation("QPSK")
        y = np.array([0.5 + 0.2j, -1.0 + 0.3j, 0.1 - 1.4j])
        terms = nda_terms(y, qpsk.points, 0.1, -0.3, SIGMA2_W)
        for k, y_n in enumerate(y):
            ctx = SampleLikelihoodContext(y_n=complex(y_n), sigma2_w=SIGMA2_W, constellation=qpsk)
            gradient, hessian = loglik_derivs(ctx, 0.1, -0.3, EstimationMode.NDA)
            assert terms.g1[k] == pytest.approx(gradient[0])
            assert terms.h12[k] == pytest.approx(hessian[0, 1])
