"""Sweep planning and shared Fisher terms for bound and harness runs."""

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np
import structlog

from ...domain.entities.bim_result import BimResult
from ...domain.entities.fisher_blocks import FisherBlocks
from ...domain.enums import EstimationMode, SweepVariable
from ...domain.services.bcrb_engine import assemble_bim
from ...domain.services.fisher_information import fisher_da, fisher_mbcrb, fisher_nda
from ...domain.services.pn_process import prior_model
from ...domain.services.random_streams import SYMBOL_STREAM, derive_seed
from ...domain.value_objects.constellation import Constellation, draw_symbols, make_constellation
from ...domain.value_objects.pn_config import ChannelConfig, PnConfig
from ..dto.experiment_spec import ExperimentSpec, format_short

logger = structlog.get_logger()

_GRID_VARIABLES = (SweepVariable.SNR_DB, SweepVariable.RHO, SweepVariable.SIGMA2_ZETA)


@dataclass(frozen=True)
class SweepPoint:
    """One (constellation, N, SNR, rho, sigma2_zeta) combination of a sweep.

    ``index`` is the position of the point in the plan and keys its random
    streams.
    """

    constellation: str
    n: int
    snr_db: float
    rho: float
    sigma2_zeta: float
    index: int = 0

    def value_of(self, variable: SweepVariable) -> float:
        """Coordinate of this point along a grid variable."""
        return float(getattr(self, variable.value))

    def pn_config(self, sigma2_init: float) -> PnConfig:
        return PnConfig(sigma2_zeta=self.sigma2_zeta, rho=self.rho, sigma2_init=sigma2_init, n=self.n)

    def channel(self) -> ChannelConfig:
        return ChannelConfig(snr_db=self.snr_db)


@dataclass
class SweepGroup:
    """Points written to one result table."""

    label: str
    constellation: str
    n: int
    fixed: dict[str, float]
    points: list[SweepPoint] = field(default_factory=list)


def plan_sweep(spec: ExperimentSpec) -> list[SweepGroup]:
    """Split the spec grids into result tables.

    There is one table per constellation, block length and combination of the
    grids that are not swept. Grid values that vary between tables appear in
    the table label.
    """
    primary = spec.sweep_variable
    grids = {
        SweepVariable.SNR_DB: spec.snr_db,
        SweepVariable.RHO: spec.rho,
        SweepVariable.SIGMA2_ZETA: spec.sigma2_zeta,
    }
    fixed_variables = [v for v in _GRID_VARIABLES if v is not primary]
    primary_values: list[float | None] = list(grids[primary]) if primary in grids else [None]

    groups: list[SweepGroup] = []
    index = 0
    for label, n in itertools.product(spec.constellation, spec.n):
        for fixed_values in itertools.product(*(grids[v] for v in fixed_variables)):
            fixed = {v.value: float(x) for v, x in zip(fixed_variables, fixed_values, strict=True)}
            parts = [spec.name, label, f"n{n}"]
            parts += [f"{v.value}{format_short(fixed[v.value])}" for v in fixed_variables if len(grids[v]) > 1]
            group = SweepGroup(label="_".join(parts), constellation=label, n=n, fixed=fixed)

            for value in primary_values:
                coordinates = dict(fixed)
                if value is not None:
                    coordinates[primary.value] = float(value)
                group.points.append(SweepPoint(
                    constellation=label,
                    n=n,
                    snr_db=coordinates["snr_db"],
                    rho=coordinates["rho"],
                    sigma2_zeta=coordinates["sigma2_zeta"],
                    index=index,
                ))
                index += 1
            groups.append(group)

    return groups


def sweep_points(spec: ExperimentSpec) -> list[SweepPoint]:
    """All points of a spec in plan order."""
    return [point for group in plan_sweep(spec) for point in group.points]


def reported_symbols(spec: ExperimentSpec, n: int) -> list[int]:
    """1-based symbol indices written for a block of length n."""
    if spec.report == "all":
        return list(range(1, n + 1))
    return [int(spec.report)]


class FisherCache:
    """Compute-once store of NDA Fisher terms.

    NDA terms depend only on the constellation and the SNR, so one Monte-Carlo
    run serves every (N, rho, sigma2_zeta) point. Lookups are thread-safe; each
    key has its own lock, so distinct terms are estimated concurrently.
    """

    def __init__(self, spec: ExperimentSpec, threads: int = 1):
        self._spec = spec
        self._threads = threads
        self._nda: dict[tuple[str, float], FisherBlocks] = {}
        self._key_locks: dict[tuple[str, float], threading.Lock] = {}
        self._lock = threading.Lock()

    def nda(self, constellation: Constellation, snr_db: float) -> FisherBlocks:
        key = (constellation.name, float(snr_db))
        with self._lock:
            cached = self._nda.get(key)
            if cached is not None:
                return cached
            key_lock = self._key_locks.setdefault(key, threading.Lock())

        with key_lock:
            with self._lock:
                cached = self._nda.get(key)
            if cached is None:
                sigma2_w = ChannelConfig(snr_db=snr_db).noise_variance(constellation.energy)
                cached = fisher_nda(
                    constellation,
                    sigma2_w,
                    mc=self._spec.nda_samples,
                    delta_grid=self._spec.delta_grid,
                    seed=self._spec.seed,
                    threads=self._threads,
                )
                with self._lock:
                    self._nda[key] = cached
        return cached

    def prefill(self, points: list[SweepPoint]) -> None:
        """Compute the NDA terms of all points up front, in plan order."""
        for point in points:
            self.nda(make_constellation(point.constellation), point.snr_db)

    def __len__(self) -> int:
        return len(self._nda)


def da_symbols(spec: ExperimentSpec, constellation: Constellation, n: int) -> np.ndarray:
    """Pilot sequence of a DA bound, drawn from the run seed per constellation and N."""
    key = spec.constellation.index(constellation.name) if constellation.name in spec.constellation else 0
    return draw_symbols(constellation, n, derive_seed(spec.seed, SYMBOL_STREAM, key, n))


def fisher_for(
    spec: ExperimentSpec,
    point: SweepPoint,
    mode: EstimationMode,
    cache: FisherCache,
    symbols: np.ndarray | None = None,
) -> FisherBlocks:
    """Expected Fisher term of one mode at one sweep point.

    ``symbols`` replaces the seeded pilot sequence of the DA term.
    """
    constellation = make_constellation(point.constellation)
    sigma2_w = point.channel().noise_variance(constellation.energy)

    if mode is EstimationMode.DA:
        pilots = da_symbols(spec, constellation, point.n) if symbols is None else symbols
        fisher = fisher_da(pilots, sigma2_w)
    elif mode is EstimationMode.MBCRB:
        fisher = fisher_mbcrb(constellation, sigma2_w)
    else:
        fisher = cache.nda(constellation, point.snr_db)
    return fisher.with_averaging(spec.delta_averaging)


def bound_at_point(
    spec: ExperimentSpec,
    point: SweepPoint,
    mode: EstimationMode,
    cache: FisherCache,
    symbols: np.ndarray | None = None,
) -> BimResult:
    """Assembled bound of one mode at one sweep point.

    Raises:
        NumericalError: If the prior or the BIM is degenerate
    """
    prior = prior_model(point.pn_config(spec.sigma2_init))
    return assemble_bim(fisher_for(spec, point, mode, cache, symbols), prior)
