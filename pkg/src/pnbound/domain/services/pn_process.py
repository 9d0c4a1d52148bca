"""Correlated Wiener phase-noise processes and their Gaussian prior.

Each transmit oscillator i and the receiver oscillator follow a Wiener process.
The receiver sees the sum phases

    phi_i[n] = theta_ti + theta_r + sum_{k<n} (zeta_ti[k] + zeta_r[k]),

where the transmit initial phases have correlation rho and the transmit
innovations are built as zeta_t2 = rho*z1 + sqrt(1 - rho^2)*z2 so that both
keep variance sigma2_zeta with covariance rho*sigma2_zeta. The stacked vector
[phi1_1..N, phi2_1..N] is zero-mean Gaussian with covariance kron(A, K),
A = [[2, 1 + rho], [1 + rho, 2]] and K[l, k] = sigma2_init + sigma2_zeta*min(l, k).
"""

import numpy as np
import structlog

from ..entities.phase_trajectories import PhaseTrajectories
from ..entities.prior_model import PriorModel
from ..exceptions import DegenerateModelError
from ..value_objects.pn_config import PnConfig
from .random_streams import SeedLike, make_rng

logger = structlog.get_logger()

DEGENERACY_EPS = 1e-6


def random_walk_covariance(cfg: PnConfig) -> np.ndarray:
    """K[l, k] = sigma2_init + sigma2_zeta * min(l, k) for 0-based l, k."""
    steps = np.arange(cfg.n, dtype=np.float64)
    return cfg.sigma2_init + cfg.sigma2_zeta * np.minimum.outer(steps, steps)


def random_walk_precision(cfg: PnConfig) -> np.ndarray:
    """Tridiagonal inverse of :func:`random_walk_covariance`.

    Raises:
        DegenerateModelError: If sigma2_zeta is 0 with more than one symbol
    """
    n = cfg.n
    if n == 1:
        return np.array([[1.0 / cfg.sigma2_init]])
    if cfg.sigma2_zeta == 0.0:
        raise DegenerateModelError(
            f"Random-walk covariance is singular for sigma2_zeta=0 and n={n}; "
            "use a positive innovation variance"
        )

    inv_zeta = 1.0 / cfg.sigma2_zeta
    diagonal = np.full(n, 2.0 * inv_zeta)
    diagonal[0] = 1.0 / cfg.sigma2_init + inv_zeta
    diagonal[-1] = inv_zeta
    off = np.full(n - 1, -inv_zeta)
    return np.diag(diagonal) + np.diag(off, 1) + np.diag(off, -1)


def sync_matrix(rho: float) -> tuple[np.ndarray, np.ndarray]:
    """Return A and its inverse for the two-transmitter coupling.

    det(A) is evaluated in the factored form (1 - rho)(3 + rho) so the inverse
    keeps full relative precision close to rho = 1.
    """
    a = np.array([[2.0, 1.0 + rho], [1.0 + rho, 2.0]])
    det = (1.0 - rho) * (3.0 + rho)
    a_inv = np.array([[2.0, -(1.0 + rho)], [-(1.0 + rho), 2.0]]) / det
    return a, a_inv


def build_covariance(cfg: PnConfig) -> PriorModel:
    """Build the prior covariance C = A (x) K and its exact inverse.

    Args:
        cfg: Phase-noise configuration with rho <= 1 - 1e-6

    Returns:
        PriorModel over [phi1_1..N, phi2_1..N]

    Raises:
        DegenerateModelError: If rho is within 1e-6 of 1 or K is singular
    """
    if 1.0 - cfg.rho < DEGENERACY_EPS * (1.0 - 1e-9):
        raise DegenerateModelError(
            f"rho={cfg.rho} is within {DEGENERACY_EPS} of 1 and the joint prior is singular; "
            "use reduced_model_rho1 for fully synchronized transmitters"
        )

    k_matrix = random_walk_covariance(cfg)
    k_precision = random_walk_precision(cfg)
    a, a_inv = sync_matrix(cfg.rho)

    logger.debug("Built prior covariance", n=cfg.n, rho=cfg.rho, sigma2_zeta=cfg.sigma2_zeta)

    return PriorModel(
        cov=np.kron(a, k_matrix),
        precision=np.kron(a_inv, k_precision),
        a_matrix=a,
        a_inverse=a_inv,
        k_matrix=k_matrix,
        k_precision=k_precision,
        rho=cfg.rho,
        sigma2_zeta=cfg.sigma2_zeta,
        sigma2_init=cfg.sigma2_init,
        n=cfg.n,
    )


def reduced_model_rho1(cfg: PnConfig) -> PriorModel:
    """Prior of the single common phase when both transmitters are synchronized.

    The common phase is a Wiener process with initial variance 2*sigma2_init and
    per-step variance 2*sigma2_zeta, so cov = 2K and precision = K^-1 / 2.

    Raises:
        ValueError: If rho is not exactly 1
        DegenerateModelError: If K is singular
    """
    if cfg.rho != 1.0:
        raise ValueError(f"The reduced model applies to rho = 1 only, got rho={cfg.rho}")

    k_matrix = random_walk_covariance(cfg)
    k_precision = random_walk_precision(cfg)

    return PriorModel(
        cov=2.0 * k_matrix,
        precision=0.5 * k_precision,
        a_matrix=np.array([[2.0]]),
        a_inverse=np.array([[0.5]]),
        k_matrix=k_matrix,
        k_precision=k_precision,
        rho=1.0,
        sigma2_zeta=cfg.sigma2_zeta,
        sigma2_init=cfg.sigma2_init,
        n=cfg.n,
        reduced=True,
    )


def prior_model(cfg: PnConfig) -> PriorModel:
    """Select the reduced model at rho = 1 and the general model otherwise."""
    if cfg.is_synchronized:
        return reduced_model_rho1(cfg)
    return build_covariance(cfg)


def sample_trajectory_batch(cfg: PnConfig, blocks: int, seed: SeedLike) -> tuple[np.ndarray, np.ndarray]:
    """Draw several independent blocks of phase trajectories.

    Args:
        cfg: Phase-noise configuration (any rho in [0, 1])
        blocks: Number of blocks
        seed: Seed for the trajectory stream

    Returns:
        Arrays phi1, phi2 of shape (blocks, n)
    """
    rng = make_rng(seed)
    n = cfg.n
    rho = cfg.rho
    coupling = np.sqrt(max(1.0 - rho * rho, 0.0))
    sigma_init = np.sqrt(cfg.sigma2_init)
    sigma_zeta = np.sqrt(cfg.sigma2_zeta)

    initial = rng.standard_normal((blocks, 3)) * sigma_init
    theta_t1 = initial[:, 0]
    theta_t2 = rho * initial[:, 0] + coupling * initial[:, 1]
    theta_r = initial[:, 2]

    steps = rng.standard_normal((3, blocks, n - 1)) * sigma_zeta
    zeta_t1 = steps[0]
    zeta_t2 = rho * steps[0] + coupling * steps[1]
    zeta_r = steps[2]

    walk1 = np.zeros((blocks, n))
    walk2 = np.zeros((blocks, n))
    walk1[:, 1:] = np.cumsum(zeta_t1 + zeta_r, axis=1)
    walk2[:, 1:] = np.cumsum(zeta_t2 + zeta_r, axis=1)

    phi1 = (theta_t1 + theta_r)[:, None] + walk1
    phi2 = (theta_t2 + theta_r)[:, None] + walk2
    return phi1, phi2


def sample_trajectories(cfg: PnConfig, seed: SeedLike) -> PhaseTrajectories:
    """Draw one block of correlated phase trajectories.

    At rho = 1 both paths are identical sample by sample.
    """
    phi1, phi2 = sample_trajectory_batch(cfg, 1, seed)
    return PhaseTrajectories(phi1=phi1[0], phi2=phi2[0])
