"""Expected Fisher information E_phi[F(phi)] for DA, MBCRB and NDA bounds.

The likelihood is invariant to a common rotation of the observation and both
phases, so the expected information of one sample depends on the phases only
through the difference delta = phi1 - phi2. Every term below is therefore a
function of delta, evaluated at phi1 = delta/2, phi2 = -delta/2 and averaged
either uniformly over [0, 2*pi) or with the prior law of delta at each symbol.

Data-aided terms are closed form:

    E[-d2/dphi_1^2]         = 2 |s|^2 / sigma2_w
    E[-d2/dphi_1 dphi_2]    = 2 |s|^2 cos(delta) / sigma2_w

The non-data-aided terms have no closed form and are estimated by Monte Carlo
on a uniform delta grid.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import structlog
from scipy.integrate import trapezoid
from scipy.stats import norm

from ..entities.fisher_blocks import (
    DeltaProfile,
    FisherBlocks,
    MonteCarloEstimate,
    MonteCarloMeta,
    SymbolBlocks,
)
from ..entities.prior_model import PriorModel
from ..enums import DeltaAveraging, EstimationMode
from ..exceptions import MonteCarloError
from ..value_objects.constellation import Constellation
from .likelihood import da_terms, nda_terms
from .random_streams import FISHER_ORACLE_STREAM, NDA_GAMMA_STREAM, make_rng
from .system_model import complex_noise

logger = structlog.get_logger()

DEFAULT_NDA_SAMPLES = 200_000
DEFAULT_DELTA_GRID = 64
MIN_DELTA_GRID = 16
DEFAULT_CHUNK_SIZE = 65_536

# Above this prior variance of delta the wrapped law is uniform to double precision
WRAP_VARIANCE_LIMIT = 100.0


@dataclass
class _RunningMoments:
    """Mean and centred sum of squares, merged chunk by chunk in a fixed order."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def merge(self, values: np.ndarray) -> None:
        size = int(values.shape[0])
        if size == 0:
            return
        chunk_mean = float(np.mean(values))
        chunk_m2 = float(np.sum((values - chunk_mean) ** 2))
        total = self.count + size
        delta = chunk_mean - self.mean
        self.mean += delta * size / total
        self.m2 += chunk_m2 + delta * delta * self.count * size / total
        self.count = total

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    def estimate(self) -> MonteCarloEstimate:
        return MonteCarloEstimate(
            value=self.mean,
            stderr=math.sqrt(self.variance / self.count) if self.count else math.inf,
            samples=self.count,
        )


def _chunk_sizes(total: int, chunk_size: int) -> list[int]:
    full, rest = divmod(total, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def fisher_da(s: np.ndarray, sigma2_w: float) -> FisherBlocks:
    """Data-aided Fisher term with one diagonal entry 2|s_n|^2 / sigma2_w per symbol.

    Args:
        s: Known transmitted symbols
        sigma2_w: Complex noise variance

    Returns:
        FisherBlocks in DA mode
    """
    if not sigma2_w > 0:
        raise ValueError(f"sigma2_w must be > 0, got {sigma2_w}")
    symbols = np.asarray(s, dtype=np.complex128)
    return FisherBlocks(
        mode=EstimationMode.DA,
        gamma_da=2.0 * np.abs(symbols) ** 2 / sigma2_w,
    )


def fisher_mbcrb(constellation: Constellation, sigma2_w: float) -> FisherBlocks:
    """Modified-bound Fisher term 2 E_s / sigma2_w, shared by all symbols."""
    if not sigma2_w > 0:
        raise ValueError(f"sigma2_w must be > 0, got {sigma2_w}")
    gamma = 2.0 * constellation.energy / sigma2_w
    return FisherBlocks(
        mode=EstimationMode.MBCRB,
        gamma_scalar_11=gamma,
        gamma_scalar_12=0.0,
        gamma_scalar_22=gamma,
    )


def _nda_grid_point(
    points: np.ndarray,
    sigma2_w: float,
    delta: float,
    samples: int,
    seed: int,
    grid_index: int,
    chunk_size: int,
) -> tuple[MonteCarloEstimate, MonteCarloEstimate]:
    diagonal = _RunningMoments()
    cross = _RunningMoments()
    amplitude = 2.0 * math.cos(delta / 2.0)

    for chunk_index, size in enumerate(_chunk_sizes(samples, chunk_size)):
        rng = make_rng(seed, NDA_GAMMA_STREAM, grid_index, chunk_index)
        symbols = points[rng.integers(0, points.shape[0], size=size)]
        y = amplitude * symbols + complex_noise(size, sigma2_w, rng)

        terms = nda_terms(y, points, delta / 2.0, -delta / 2.0, sigma2_w)
        x11 = -0.5 * (terms.h11 + terms.h22)
        x12 = -terms.h12

        bad = ~(np.isfinite(x11) & np.isfinite(x12))
        if np.any(bad):
            raise MonteCarloError(grid_index=grid_index, bad_samples=int(np.sum(bad)), delta=delta)

        diagonal.merge(x11)
        cross.merge(x12)

    return diagonal.estimate(), cross.estimate()


def nda_information_at_delta(
    constellation: Constellation,
    sigma2_w: float,
    delta: float,
    mc: int = DEFAULT_NDA_SAMPLES,
    seed: int = 0,
    grid_index: int = 0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> tuple[MonteCarloEstimate, MonteCarloEstimate]:
    """Monte-Carlo NDA information at one phase difference.

    Returns:
        Estimates of gamma_11(delta) (symmetrized over both paths) and gamma_12(delta)

    Raises:
        MonteCarloError: If any Hessian sample is not finite
    """
    return _nda_grid_point(constellation.points, sigma2_w, delta, mc, seed, grid_index, chunk_size)


def fisher_nda(
    constellation: Constellation,
    sigma2_w: float,
    mc: int = DEFAULT_NDA_SAMPLES,
    delta_grid: int = DEFAULT_DELTA_GRID,
    seed: int = 0,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> FisherBlocks:
    """Non-data-aided Fisher term by Monte Carlo over a uniform delta grid.

    Grid points run in parallel; each point and chunk draws from its own derived
    stream, so the estimate does not depend on the thread count.

    Args:
        constellation: Symbol alphabet
        sigma2_w: Complex noise variance
        mc: Samples per grid point
        delta_grid: Number of grid points on [0, 2*pi)
        seed: Master seed
        threads: Worker threads
        chunk_size: Samples evaluated per vectorized chunk

    Returns:
        FisherBlocks in NDA mode carrying the delta profile

    Raises:
        MonteCarloError: If any Hessian sample is not finite
    """
    if not sigma2_w > 0:
        raise ValueError(f"sigma2_w must be > 0, got {sigma2_w}")
    if delta_grid < MIN_DELTA_GRID:
        raise ValueError(f"delta_grid must be at least {MIN_DELTA_GRID}, got {delta_grid}")
    if mc < 2:
        raise ValueError(f"mc must be at least 2 samples per grid point, got {mc}")

    deltas = 2.0 * np.pi * np.arange(delta_grid) / delta_grid
    points = constellation.points

    logger.info("Estimating NDA information",
                constellation=constellation.name,
                sigma2_w=sigma2_w,
                samples=mc,
                delta_grid=delta_grid,
                threads=threads)

    def evaluate(grid_index: int) -> tuple[MonteCarloEstimate, MonteCarloEstimate]:
        return _nda_grid_point(points, sigma2_w, float(deltas[grid_index]), mc, seed, grid_index, chunk_size)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(evaluate, range(delta_grid)))

    profile = DeltaProfile(
        deltas=deltas,
        gamma_11=np.array([r[0].value for r in results]),
        gamma_12=np.array([r[1].value for r in results]),
        stderr_11=np.array([r[0].stderr for r in results]),
        stderr_12=np.array([r[1].stderr for r in results]),
    )

    gamma_11 = math.fsum(profile.gamma_11) / delta_grid
    gamma_12 = math.fsum(profile.gamma_12) / delta_grid
    stderr_11 = math.sqrt(math.fsum(profile.stderr_11 ** 2)) / delta_grid
    stderr_12 = math.sqrt(math.fsum(profile.stderr_12 ** 2)) / delta_grid

    logger.info("Estimated NDA information",
                constellation=constellation.name,
                gamma_11=gamma_11,
                gamma_12=gamma_12,
                stderr_11=stderr_11)

    return FisherBlocks(
        mode=EstimationMode.NDA,
        gamma_scalar_11=gamma_11,
        gamma_scalar_12=gamma_12,
        gamma_scalar_22=gamma_11,
        mc_meta=MonteCarloMeta(
            samples_per_point=mc,
            delta_grid=delta_grid,
            seed=seed,
            stderr_11=stderr_11,
            stderr_12=stderr_12,
            total_samples=mc * delta_grid,
        ),
        profile=profile,
    )


def nda_information_quadrature(
    constellation: Constellation,
    sigma2_w: float,
    delta: float,
    grid: int = 201,
) -> tuple[float, float, float]:
    """Deterministic NDA information at one delta by 2-D grid quadrature.

    Each mixture component is integrated on a grid x grid lattice covering its
    mean +/- 6 standard deviations per real dimension. Intended as a cross-check
    at small noise variance.

    Returns:
        (gamma_11, gamma_12, gamma_22) at the given delta
    """
    points = constellation.points
    sigma_axis = math.sqrt(sigma2_w / 2.0)
    offsets = np.linspace(-6.0 * sigma_axis, 6.0 * sigma_axis, grid)
    amplitude = 2.0 * math.cos(delta / 2.0)

    totals = np.zeros(3)
    for symbol in points:
        mean = amplitude * symbol
        y = (mean.real + offsets)[:, None] + 1j * (mean.imag + offsets)[None, :]
        density = np.exp(-np.abs(y - mean) ** 2 / sigma2_w) / (np.pi * sigma2_w)
        mass = trapezoid(trapezoid(density, offsets, axis=1), offsets)

        terms = nda_terms(y, points, delta / 2.0, -delta / 2.0, sigma2_w)
        for k, hessian in enumerate((terms.h11, terms.h12, terms.h22)):
            integral = trapezoid(trapezoid(-hessian * density, offsets, axis=1), offsets)
            totals[k] += integral / mass

    totals /= points.shape[0]
    return float(totals[0]), float(totals[1]), float(totals[2])


def fisher_da_monte_carlo(
    symbol: complex,
    sigma2_w: float,
    mc: int = 1_000_000,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> tuple[MonteCarloEstimate, MonteCarloEstimate]:
    """Monte-Carlo estimate of the DA Fisher entries with delta uniform on [0, 2*pi).

    Returns:
        Estimates of E[-d2/dphi_1^2] and E[-d2/dphi_1 dphi_2]
    """
    diagonal = _RunningMoments()
    cross = _RunningMoments()
    for chunk_index, size in enumerate(_chunk_sizes(mc, chunk_size)):
        rng = make_rng(seed, FISHER_ORACLE_STREAM, chunk_index)
        delta = rng.uniform(0.0, 2.0 * np.pi, size=size)
        y = 2.0 * np.cos(delta / 2.0) * symbol + complex_noise(size, sigma2_w, rng)
        terms = da_terms(y, symbol, delta / 2.0, -delta / 2.0, sigma2_w)
        diagonal.merge(-terms.h11)
        cross.merge(-terms.h12)
    return diagonal.estimate(), cross.estimate()


def delta_weights(delta_variance: np.ndarray, delta_grid: int) -> np.ndarray:
    """Probability of each delta grid cell under the wrapped prior law of delta.

    Cell g covers [delta_g - pi/G, delta_g + pi/G). Rows with a large prior
    variance are uniform; a zero variance puts all mass on delta = 0.

    Args:
        delta_variance: Prior variance of delta at each symbol, shape (N,)
        delta_grid: Number of grid cells G

    Returns:
        Row-stochastic weight matrix of shape (N, G)
    """
    variances = np.asarray(delta_variance, dtype=np.float64)
    weights = np.full((variances.shape[0], delta_grid), 1.0 / delta_grid)
    half_width = np.pi / delta_grid
    centers = 2.0 * np.pi * np.arange(delta_grid) / delta_grid

    for row, variance in enumerate(variances):
        if variance > WRAP_VARIANCE_LIMIT:
            continue
        if variance <= 0.0:
            weights[row] = 0.0
            weights[row, 0] = 1.0
            continue
        sigma = math.sqrt(variance)
        wraps = int(math.ceil((6.0 * sigma + np.pi) / (2.0 * np.pi)))
        shifts = 2.0 * np.pi * np.arange(-wraps, wraps + 1)
        upper = norm.cdf((centers[:, None] + half_width + shifts[None, :]) / sigma)
        lower = norm.cdf((centers[:, None] - half_width + shifts[None, :]) / sigma)
        cell = np.sum(upper - lower, axis=1)
        weights[row] = cell / np.sum(cell)

    return weights


def per_symbol_blocks(fisher: FisherBlocks, prior: PriorModel) -> SymbolBlocks:
    """Expand a Fisher term into per-symbol 2x2 blocks for a given prior.

    Uniform averaging gives a zero cross term for DA and MBCRB and the grid mean
    for NDA. Prior averaging weights the delta dependence with the law of
    phi1_n - phi2_n implied by the prior at each symbol.
    """
    n = prior.n
    delta_var = prior.delta_variance()
    use_prior = fisher.averaging is DeltaAveraging.PRIOR
    zeros = np.zeros(n)

    if fisher.mode is EstimationMode.NDA:
        if use_prior:
            if fisher.profile is None:
                raise ValueError("Prior-weighted NDA information needs the delta profile")
            weights = delta_weights(delta_var, fisher.profile.size)
            d11 = weights @ fisher.profile.gamma_11
            d12 = weights @ fisher.profile.gamma_12
            se11 = np.sqrt((weights ** 2) @ fisher.profile.stderr_11 ** 2)
            se12 = np.sqrt((weights ** 2) @ fisher.profile.stderr_12 ** 2)
            return SymbolBlocks(d11=d11, d12=d12, d22=d11.copy(), stderr_11=se11, stderr_12=se12)

        meta = fisher.mc_meta
        return SymbolBlocks(
            d11=np.full(n, fisher.gamma_scalar_11),
            d12=np.full(n, fisher.gamma_scalar_12 or 0.0),
            d22=np.full(n, fisher.gamma_scalar_22 if fisher.gamma_scalar_22 is not None else fisher.gamma_scalar_11),
            stderr_11=np.full(n, meta.stderr_11 if meta else 0.0),
            stderr_12=np.full(n, meta.stderr_12 if meta else 0.0),
        )

    if fisher.mode is EstimationMode.DA:
        if fisher.gamma_da is None or fisher.gamma_da.shape[0] != n:
            raise ValueError(f"DA Fisher term has {fisher.n} symbols but the prior has {n}")
        diagonal = fisher.gamma_da.astype(np.float64)
    else:
        diagonal = np.full(n, float(fisher.gamma_scalar_11))

    cross = diagonal * np.exp(-0.5 * delta_var) if use_prior else zeros.copy()
    return SymbolBlocks(d11=diagonal, d12=cross, d22=diagonal.copy(), stderr_11=zeros, stderr_12=zeros.copy())


def common_phase_information(fisher: FisherBlocks, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Information about the single common phase when both paths coincide.

    This is F11 + F22 + 2 F12 at delta = 0 for every symbol.

    Returns:
        Per-symbol information and its standard error, each of shape (n,)
    """
    if fisher.mode is EstimationMode.DA:
        if fisher.gamma_da is None or fisher.gamma_da.shape[0] != n:
            raise ValueError(f"DA Fisher term has {fisher.n} symbols but the prior has {n}")
        return 4.0 * fisher.gamma_da.astype(np.float64), np.zeros(n)

    if fisher.mode is EstimationMode.MBCRB:
        return np.full(n, 4.0 * float(fisher.gamma_scalar_11)), np.zeros(n)

    if fisher.profile is None:
        raise ValueError("Common-phase NDA information needs the delta profile")
    profile = fisher.profile
    info = 2.0 * (profile.gamma_11[0] + profile.gamma_12[0])
    # gamma_11(0) and gamma_12(0) share samples; add the errors linearly
    stderr = 2.0 * (profile.stderr_11[0] + profile.stderr_12[0])
    return np.full(n, info), np.full(n, stderr)
