"""Block MAP phase estimator.

Maximizes J(phi) = sum_n log f(y_n | phi1_n, phi2_n) - 1/2 phi^T C^-1 phi with a
Levenberg-damped Newton iteration. The negative Hessian of J is the prior
precision plus per-symbol 2x2 likelihood blocks; with the phases interleaved as
z[2n + i] = phi_i[n] it has bandwidth 3 and each step is an O(N) banded
Cholesky solve.
"""

from dataclasses import dataclass

import numpy as np
import structlog
from scipy import linalg as la

from ..entities.map_result import MapResult
from ..entities.phase_trajectories import ReceivedBlock
from ..entities.prior_model import PriorModel
from ..enums import EstimationMode
from ..value_objects.constellation import Constellation
from .likelihood import LikelihoodTerms, da_terms, nda_terms

logger = structlog.get_logger()

MAX_ITERATIONS = 100
GRADIENT_TOLERANCE = 1e-6
MAX_DAMPING_ATTEMPTS = 40
MIN_HALF_DIFFERENCE = 1e-2


@dataclass(frozen=True)
class _Evaluation:
    objective: float
    gradient: np.ndarray
    terms: LikelihoodTerms


class _MapProblem:
    """Objective, gradient and banded curvature for one block."""

    def __init__(
        self,
        block: ReceivedBlock,
        prior: PriorModel,
        mode: EstimationMode,
        sigma2_w: float,
        constellation: Constellation | None,
        h1: complex,
        h2: complex,
    ):
        self._y = block.y
        self._s = block.s
        self._prior = prior
        self._mode = mode
        self._sigma2_w = sigma2_w
        self._points = None if constellation is None else constellation.points
        self._h1 = h1
        self._h2 = h2
        self.n = prior.n
        self.reduced = prior.reduced

    def phases(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self.reduced:
            return z, z
        return z[0::2], z[1::2]

    def _terms(self, phi1: np.ndarray, phi2: np.ndarray) -> LikelihoodTerms:
        if self._mode is EstimationMode.DA:
            return da_terms(self._y, self._s, phi1, phi2, self._sigma2_w, self._h1, self._h2)
        return nda_terms(self._y, self._points, phi1, phi2, self._sigma2_w, self._h1, self._h2)

    def _prior_product(self, z: np.ndarray) -> np.ndarray:
        """Precision times z in the interleaved (or reduced) ordering."""
        if self.reduced:
            return self._prior.precision @ z
        stacked = np.concatenate([z[0::2], z[1::2]])
        product = self._prior.precision @ stacked
        out = np.empty_like(z)
        out[0::2] = product[: self.n]
        out[1::2] = product[self.n:]
        return out

    def evaluate(self, z: np.ndarray) -> _Evaluation:
        phi1, phi2 = self.phases(z)
        terms = self._terms(phi1, phi2)
        prior_grad = self._prior_product(z)
        objective = float(np.sum(terms.loglik) - 0.5 * z @ prior_grad)

        if self.reduced:
            gradient = terms.g1 + terms.g2 - prior_grad
        else:
            gradient = np.empty_like(z)
            gradient[0::2] = terms.g1
            gradient[1::2] = terms.g2
            gradient -= prior_grad
        return _Evaluation(objective=objective, gradient=gradient, terms=terms)

    def curvature_bands(self, terms: LikelihoodTerms) -> np.ndarray:
        """Upper banded form of -Hessian(J) for scipy.linalg.solveh_banded."""
        k_precision = self._prior.k_precision
        kd0 = np.diag(k_precision).copy()
        kd1 = np.diag(k_precision, 1).copy()
        n = self.n

        if self.reduced:
            scale = self._prior.a_inverse[0, 0]
            bands = np.zeros((2, n))
            bands[1] = scale * kd0 - (terms.h11 + 2.0 * terms.h12 + terms.h22)
            bands[0, 1:] = scale * kd1
            return bands

        a_inv = self._prior.a_inverse
        a00, a01, a11 = a_inv[0, 0], a_inv[0, 1], a_inv[1, 1]
        bands = np.zeros((4, 2 * n))
        bands[3, 0::2] = kd0 * a00 - terms.h11
        bands[3, 1::2] = kd0 * a11 - terms.h22
        bands[2, 1::2] = kd0 * a01 - terms.h12
        bands[2, 2::2] = kd1 * a01
        bands[1, 2::2] = kd1 * a00
        bands[1, 3::2] = kd1 * a11
        bands[0, 3::2] = kd1 * a01
        return bands


def _damped(bands: np.ndarray, damping: float) -> np.ndarray:
    if damping == 0.0:
        return bands
    shifted = bands.copy()
    shifted[-1] += damping
    return shifted


def default_initialization(block: ReceivedBlock, prior: PriorModel, mode: EstimationMode, constellation: Constellation | None) -> np.ndarray:
    """Starting point for the Newton iteration.

    DA unwraps the angle of y_n conj(s_n) for the common phase. NDA starts the
    common phase at zero. The two paths are split symmetrically by the median
    half-difference implied by |y_n| / (2|s_n|), which keeps the iteration off the
    phi1 = phi2 saddle.
    """
    if mode is EstimationMode.DA:
        common = np.unwrap(np.angle(block.y * np.conj(block.s)))
        ratio = np.abs(block.y) / (2.0 * np.maximum(np.abs(block.s), 1e-300))
    else:
        energy = constellation.energy if constellation is not None else 1.0
        common = np.zeros(block.n)
        ratio = np.abs(block.y) / (2.0 * np.sqrt(energy))

    if prior.reduced:
        return common

    half_difference = max(float(np.median(np.arccos(np.clip(ratio, 0.0, 1.0)))), MIN_HALF_DIFFERENCE)
    z = np.empty(2 * block.n)
    z[0::2] = common + half_difference
    z[1::2] = common - half_difference
    return z


def power_law_initialization(block: ReceivedBlock, prior: PriorModel, constellation: Constellation) -> np.ndarray:
    """NDA start from the K-th power phase of the samples, K the rotational order.

    Returns:
        Stacked [phi1, phi2] (2N), or the common phase (N) for the reduced model,
        in the layout ``map_estimate`` takes as ``init``
    """
    order = constellation.rotational_symmetries()
    common = np.unwrap(np.angle(block.y ** order) - np.angle(np.mean(constellation.points ** order))) / order
    ratio = np.abs(block.y) / (2.0 * np.sqrt(constellation.energy))
    if prior.reduced:
        return common
    half_difference = max(float(np.median(np.arccos(np.clip(ratio, 0.0, 1.0)))), MIN_HALF_DIFFERENCE)
    return np.concatenate([common + half_difference, common - half_difference])


def map_estimate(
    block: ReceivedBlock,
    prior: PriorModel,
    mode: EstimationMode,
    sigma2_w: float,
    constellation: Constellation | None = None,
    init: np.ndarray | None = None,
    h1: complex = 1 + 0j,
    h2: complex = 1 + 0j,
    max_iterations: int = MAX_ITERATIONS,
    tolerance: float = GRADIENT_TOLERANCE,
) -> MapResult:
    """Maximize the block posterior of the phases.

    Args:
        block: Received samples (with symbols for DA)
        prior: General or reduced prior with the block length
        mode: EstimationMode.DA or EstimationMode.NDA
        sigma2_w: Complex noise variance
        constellation: Symbol alphabet (NDA)
        init: Starting phases, either stacked [phi1, phi2] (2N) or the reduced phase (N)
        h1: Channel gain of path 1
        h2: Channel gain of path 2
        max_iterations: Newton iteration limit
        tolerance: Gradient 2-norm at which the iteration stops

    Returns:
        MapResult; ``converged`` is False if the limit was reached first
    """
    if block.n != prior.n:
        raise ValueError(f"Block length {block.n} does not match prior length {prior.n}")
    if mode is EstimationMode.DA and not block.has_symbols:
        raise ValueError("DA estimation needs the transmitted symbols in the block")
    if mode is EstimationMode.NDA and constellation is None:
        raise ValueError("NDA estimation needs the constellation")
    if mode is EstimationMode.MBCRB:
        raise ValueError("MBCRB is a bound, not an estimator mode; use DA or NDA")

    problem = _MapProblem(block, prior, mode, sigma2_w, constellation, h1, h2)

    if init is None:
        z = default_initialization(block, prior, mode, constellation)
    elif prior.reduced:
        z = np.asarray(init, dtype=np.float64).copy()
    else:
        stacked = np.asarray(init, dtype=np.float64)
        z = np.empty(2 * block.n)
        z[0::2] = stacked[: block.n]
        z[1::2] = stacked[block.n:]

    current = problem.evaluate(z)
    damping = 0.0
    iterations = 0
    converged = False

    for iterations in range(1, max_iterations + 1):
        gradient_norm = float(np.linalg.norm(current.gradient))
        if gradient_norm < tolerance:
            converged = True
            iterations -= 1
            break

        bands = problem.curvature_bands(current.terms)
        floor = 1e-10 * max(float(np.max(np.abs(bands[-1]))), 1.0)
        accepted = False

        for _ in range(MAX_DAMPING_ATTEMPTS):
            try:
                step = la.solveh_banded(_damped(bands, damping), current.gradient, lower=False)
            except la.LinAlgError:
                damping = max(10.0 * damping, floor)
                continue

            candidate = problem.evaluate(z + step)
            if np.isfinite(candidate.objective) and candidate.objective >= current.objective:
                z = z + step
                current = candidate
                damping = 0.0 if damping <= floor else damping / 10.0
                accepted = True
                break
            damping = max(10.0 * damping, floor)

        if not accepted:
            logger.debug("MAP iteration stalled", iteration=iterations, gradient_norm=gradient_norm)
            break
    else:
        converged = float(np.linalg.norm(current.gradient)) < tolerance

    gradient_norm = float(np.linalg.norm(current.gradient))
    converged = converged or gradient_norm < tolerance
    phi1, phi2 = problem.phases(z)

    logger.debug("MAP estimate finished",
                 mode=mode.value,
                 converged=converged,
                 iterations=iterations,
                 gradient_norm=gradient_norm)

    return MapResult(
        phi1_hat=phi1.copy(),
        phi2_hat=phi2.copy(),
        converged=converged,
        iterations=iterations,
        gradient_norm=gradient_norm,
        objective=current.objective,
    )
