"""Bayesian information matrix assembly and per-symbol bounds."""

import numpy as np
import structlog
from scipy import linalg as la

from ..entities.bim_result import BimResult
from ..entities.fisher_blocks import FisherBlocks, SymbolBlocks
from ..entities.prior_model import PriorModel
from ..exceptions import NotPositiveDefiniteError
from .fisher_information import common_phase_information, per_symbol_blocks

logger = structlog.get_logger()


def spd_inverse(matrix: np.ndarray) -> np.ndarray:
    """Invert a symmetric positive-definite matrix through its Cholesky factor.

    Raises:
        NotPositiveDefiniteError: If the factorization fails
    """
    try:
        factor = la.cho_factor(matrix, lower=True, check_finite=True)
    except (la.LinAlgError, ValueError):
        min_eigenvalue = float(np.min(la.eigvalsh(matrix))) if np.all(np.isfinite(matrix)) else float("nan")
        raise NotPositiveDefiniteError(min_eigenvalue=min_eigenvalue, size=matrix.shape[0]) from None

    inverse = la.cho_solve(factor, np.eye(matrix.shape[0]))
    return 0.5 * (inverse + inverse.T)


def _joint_inverse(blocks: SymbolBlocks, prior: PriorModel) -> tuple[np.ndarray, np.ndarray]:
    bim = blocks.matrix() + prior.precision
    bim = 0.5 * (bim + bim.T)
    return bim, spd_inverse(bim)


def _diagonal_phi1(inverse: np.ndarray, n: int) -> np.ndarray:
    return np.diag(inverse)[:n].copy()


def _propagated_stderr(blocks: SymbolBlocks, prior: PriorModel, base: np.ndarray) -> np.ndarray | None:
    """First-order bound error from the Monte-Carlo error of the Fisher terms.

    The diagonal and cross terms are perturbed by one standard error each and
    the two bound shifts are combined in quadrature.
    """
    if not (np.any(blocks.stderr_11 > 0) or np.any(blocks.stderr_12 > 0)):
        return None

    n = blocks.n
    shifted_diagonal = SymbolBlocks(
        d11=blocks.d11 + blocks.stderr_11,
        d12=blocks.d12,
        d22=blocks.d22 + blocks.stderr_11,
        stderr_11=blocks.stderr_11,
        stderr_12=blocks.stderr_12,
    )
    shifted_cross = SymbolBlocks(
        d11=blocks.d11,
        d12=blocks.d12 + blocks.stderr_12,
        d22=blocks.d22,
        stderr_11=blocks.stderr_11,
        stderr_12=blocks.stderr_12,
    )
    delta_diagonal = _diagonal_phi1(_joint_inverse(shifted_diagonal, prior)[1], n) - base
    delta_cross = _diagonal_phi1(_joint_inverse(shifted_cross, prior)[1], n) - base
    return np.sqrt(delta_diagonal ** 2 + delta_cross ** 2)


def _assemble_reduced(fisher: FisherBlocks, prior: PriorModel) -> BimResult:
    n = prior.n
    info, info_stderr = common_phase_information(fisher, n)
    bim = np.diag(info) + prior.precision
    common = spd_inverse(bim)
    variance = np.diag(common).copy()

    bound_stderr = None
    if np.any(info_stderr > 0):
        shifted = spd_inverse(np.diag(info + info_stderr) + prior.precision)
        bound_stderr = np.abs(np.diag(shifted) - variance)

    logger.debug("Assembled reduced BIM", mode=fisher.mode.value, n=n)

    return BimResult(
        bim=bim,
        bim_inv=np.kron(np.ones((2, 2)), common),
        mse_phi1=variance,
        mse_phi2=variance.copy(),
        cross_cov=variance.copy(),
        sigma2_eps_tilde=np.zeros(n),
        mode=fisher.mode,
        bound_stderr=bound_stderr,
        reduced=True,
    )


def assemble_bim(fisher: FisherBlocks, prior: PriorModel) -> BimResult:
    """Assemble B = E_phi[F(phi)] + C^-1, invert it and read off the bounds.

    Args:
        fisher: Expected Fisher term of one estimation mode
        prior: General prior (rho < 1) or reduced rho = 1 model

    Returns:
        BimResult with per-symbol MSE bounds and residual half-difference variances

    Raises:
        NotPositiveDefiniteError: If B is not positive definite
        ValueError: If the Fisher term and prior disagree on the block length
    """
    if prior.reduced:
        return _assemble_reduced(fisher, prior)

    n = prior.n
    blocks = per_symbol_blocks(fisher, prior)
    bim, bim_inv = _joint_inverse(blocks, prior)

    index = np.arange(n)
    mse_phi1 = bim_inv[index, index].copy()
    mse_phi2 = bim_inv[n + index, n + index].copy()
    cross_cov = bim_inv[index, n + index].copy()
    sigma2_eps_tilde = np.maximum((mse_phi1 + mse_phi2 - 2.0 * cross_cov) / 4.0, 0.0)

    logger.debug("Assembled BIM",
                 mode=fisher.mode.value,
                 n=n,
                 rho=prior.rho,
                 averaging=fisher.averaging.value)

    return BimResult(
        bim=bim,
        bim_inv=bim_inv,
        mse_phi1=mse_phi1,
        mse_phi2=mse_phi2,
        cross_cov=cross_cov,
        sigma2_eps_tilde=sigma2_eps_tilde,
        mode=fisher.mode,
        bound_stderr=_propagated_stderr(blocks, prior, mse_phi1),
    )
