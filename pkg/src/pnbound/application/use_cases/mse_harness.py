"""Use case for the MAP estimator Monte-Carlo harness.

Each trial samples phase trajectories, symbols and noise from its own derived
stream, estimates the phases of the block and records the error of phi1.
The posterior is symmetric under exchanging the two paths and each path is
identifiable only modulo 2*pi (modulo 2*pi/K for NDA with a K-fold symmetric
constellation). Per block the harness keeps the path assignment with the
smaller squared error and removes the nearest multiple of the ambiguity period
from each path's block-mean error. NDA numbers are therefore optimistic.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import structlog

from ...domain.entities.map_result import MapResult
from ...domain.entities.phase_trajectories import PhaseTrajectories
from ...domain.entities.prior_model import PriorModel
from ...domain.enums import EstimationMode
from ...domain.services.map_estimator import map_estimate, power_law_initialization
from ...domain.services.pn_process import prior_model, sample_trajectories
from ...domain.services.random_streams import (
    HARNESS_STREAM,
    NOISE_STREAM,
    SYMBOL_STREAM,
    TRAJECTORY_STREAM,
    derive_seed,
)
from ...domain.services.system_model import observe_block
from ...domain.value_objects.constellation import Constellation, draw_symbols, make_constellation
from ...domain.value_objects.pn_config import PnConfig
from ..dto.experiment_spec import MIN_ESTIMATOR_TRIALS, ExperimentSpec
from ..dto.result_dto import HarnessRow, SweepRow
from ..services.sweep_plan import (
    FisherCache,
    SweepPoint,
    bound_at_point,
    reported_symbols,
    sweep_points,
)

logger = structlog.get_logger()

ESTIMATOR_MODES = (EstimationMode.DA, EstimationMode.NDA)


@dataclass(frozen=True)
class HarnessOutcome:
    """Per-symbol empirical MSE of phi1 with the matching bound at one point."""

    point: SweepPoint
    mode: EstimationMode
    trials: int
    mse: np.ndarray
    mse_stderr: np.ndarray
    bound: np.ndarray
    converged_fraction: float

    def row(self, symbol_index: int) -> HarnessRow:
        """Harness table row at a 1-based symbol index."""
        k = symbol_index - 1
        return HarnessRow(
            mode=self.mode.value,
            constellation=self.point.constellation,
            n=self.point.n,
            snr_db=self.point.snr_db,
            rho=self.point.rho,
            sigma2_zeta=self.point.sigma2_zeta,
            symbol_index=symbol_index,
            trials=self.trials,
            empirical_mse=float(self.mse[k]),
            mse_stderr=float(self.mse_stderr[k]),
            bound=float(self.bound[k]),
            converged_fraction=self.converged_fraction,
        )


def ambiguity_period(mode: EstimationMode, constellation: Constellation) -> float:
    """Phase period within which a path is identifiable."""
    if mode is EstimationMode.NDA:
        return 2.0 * math.pi / constellation.rotational_symmetries()
    return 2.0 * math.pi


def _remove_offset(error: np.ndarray, period: float) -> np.ndarray:
    return error - period * np.round(np.mean(error) / period)


def resolve_errors(phases: PhaseTrajectories, estimate: MapResult, period: float) -> tuple[np.ndarray, np.ndarray]:
    """Phase errors of both paths after resolving the swap and period ambiguities."""
    candidates = (
        (phases.phi1 - estimate.phi1_hat, phases.phi2 - estimate.phi2_hat),
        (phases.phi1 - estimate.phi2_hat, phases.phi2 - estimate.phi1_hat),
    )
    best: tuple[np.ndarray, np.ndarray] | None = None
    best_cost = math.inf
    for e1, e2 in candidates:
        e1 = _remove_offset(e1, period)
        e2 = _remove_offset(e2, period)
        cost = float(np.sum(e1 ** 2) + np.sum(e2 ** 2))
        if cost < best_cost:
            best, best_cost = (e1, e2), cost
    assert best is not None
    return best


@dataclass(frozen=True)
class _TrialSetup:
    spec: ExperimentSpec
    point: SweepPoint
    mode: EstimationMode
    constellation: Constellation
    cfg: PnConfig
    prior: PriorModel
    sigma2_w: float
    period: float
    cache: FisherCache
    per_trial_bound: bool


def _run_trial(setup: _TrialSetup, trial: int) -> tuple[np.ndarray, bool, np.ndarray | None]:
    seed = setup.spec.seed
    keys = (HARNESS_STREAM, setup.point.index, trial)
    n = setup.point.n

    phases = sample_trajectories(setup.cfg, derive_seed(seed, *keys, TRAJECTORY_STREAM))
    symbols = draw_symbols(setup.constellation, n, derive_seed(seed, *keys, SYMBOL_STREAM))
    block = observe_block(
        phases,
        symbols,
        setup.point.channel(),
        setup.sigma2_w,
        derive_seed(seed, *keys, NOISE_STREAM),
        keep_symbols=setup.mode is EstimationMode.DA,
    )

    init = None
    if setup.mode is EstimationMode.NDA:
        init = power_law_initialization(block, setup.prior, setup.constellation)
    estimate = map_estimate(block, setup.prior, setup.mode, setup.sigma2_w, constellation=setup.constellation, init=init)
    error_1, _ = resolve_errors(phases, estimate, setup.period)

    bound = None
    if setup.per_trial_bound:
        bound = bound_at_point(setup.spec, setup.point, EstimationMode.DA, setup.cache, symbols).mse_phi1
    return error_1, estimate.converged, bound


def harness_point(
    spec: ExperimentSpec,
    point: SweepPoint,
    mode: EstimationMode,
    trials: int,
    cache: FisherCache,
    threads: int = 1,
) -> HarnessOutcome:
    """Run the estimator harness at one sweep point.

    The DA bound of a constant-modulus constellation does not depend on the
    symbols; otherwise it is averaged over the symbol sequences of the trials.

    Raises:
        ValueError: If fewer than 100 trials are requested or the mode is MBCRB
    """
    if trials < MIN_ESTIMATOR_TRIALS:
        raise ValueError(f"The estimator harness needs at least {MIN_ESTIMATOR_TRIALS} trials, got {trials}")
    if mode not in ESTIMATOR_MODES:
        raise ValueError(f"{mode.value} has no estimator; use DA or NDA")

    constellation = make_constellation(point.constellation)
    cfg = point.pn_config(spec.sigma2_init)
    per_trial_bound = mode is EstimationMode.DA and not constellation.is_constant_modulus
    setup = _TrialSetup(
        spec=spec,
        point=point,
        mode=mode,
        constellation=constellation,
        cfg=cfg,
        prior=prior_model(cfg),
        sigma2_w=point.channel().noise_variance(constellation.energy),
        period=ambiguity_period(mode, constellation),
        cache=cache,
        per_trial_bound=per_trial_bound,
    )

    logger.info("Running estimator harness",
                mode=mode.value,
                constellation=point.constellation,
                n=point.n,
                snr_db=point.snr_db,
                rho=point.rho,
                trials=trials)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(lambda t: _run_trial(setup, t), range(trials)))

    squared = np.stack([r[0] for r in results]) ** 2
    converged = sum(1 for r in results if r[1])

    if per_trial_bound:
        bound = np.mean(np.stack([r[2] for r in results]), axis=0)
    else:
        bound = bound_at_point(spec, point, mode, cache).mse_phi1

    outcome = HarnessOutcome(
        point=point,
        mode=mode,
        trials=trials,
        mse=squared.mean(axis=0),
        mse_stderr=squared.std(axis=0, ddof=1) / math.sqrt(trials),
        bound=bound,
        converged_fraction=converged / trials,
    )

    if converged < trials:
        logger.warning("Some MAP estimates did not converge",
                       mode=mode.value,
                       snr_db=point.snr_db,
                       rho=point.rho,
                       converged=converged,
                       trials=trials)
    return outcome


def mse_harness(
    spec: ExperimentSpec,
    trials: int | None = None,
    seed: int | None = None,
    threads: int = 1,
    cache: FisherCache | None = None,
) -> list[HarnessRow]:
    """Empirical MAP MSE against the bound for every point and estimator mode.

    MBCRB entries of ``spec.mode`` are skipped; rows follow the sweep plan
    order, then mode order, then symbol order.

    Args:
        spec: Validated experiment spec
        trials: Trials per point (default ``spec.estimator_trials``)
        seed: Master seed overriding the spec
        threads: Worker threads for the trials
        cache: Fisher cache shared with a bound sweep of the same spec

    Returns:
        Harness rows with empirical MSE, its standard error, bound and gap
    """
    spec = spec.with_overrides(seed=seed)
    trials = spec.estimator_trials if trials is None else trials
    cache = cache or FisherCache(spec, threads=threads)

    rows: list[HarnessRow] = []
    for point in sweep_points(spec):
        for mode in spec.mode:
            if mode not in ESTIMATOR_MODES:
                continue
            outcome = harness_point(spec, point, mode, trials, cache, threads)
            rows.extend(outcome.row(k) for k in reported_symbols(spec, point.n))
    return rows


def fill_empirical_mse(
    spec: ExperimentSpec,
    point: SweepPoint,
    rows: list[SweepRow],
    cache: FisherCache,
    threads: int = 1,
) -> list[SweepRow]:
    """Fill the empirical MSE column of the DA and NDA rows of one sweep point."""
    outcomes = {
        mode.value: harness_point(spec, point, mode, spec.estimator_trials, cache, threads)
        for mode in spec.mode
        if mode in ESTIMATOR_MODES
    }
    filled = []
    for row in rows:
        outcome = outcomes.get(row.mode)
        filled.append(row if outcome is None else row.with_empirical(float(outcome.mse[row.symbol_index - 1])))
    return filled
