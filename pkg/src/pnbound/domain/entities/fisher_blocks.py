"""Expected Fisher information terms of the Bayesian information matrix."""

from dataclasses import dataclass, replace

import numpy as np

from ..enums import DeltaAveraging, EstimationMode


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean of a Monte-Carlo estimator with its standard error."""

    value: float
    stderr: float
    samples: int


@dataclass(frozen=True)
class MonteCarloMeta:
    """Budget and seed of a Monte-Carlo Fisher estimate."""

    samples_per_point: int
    delta_grid: int
    seed: int
    stderr_11: float
    stderr_12: float
    total_samples: int = 0


@dataclass(frozen=True, eq=False)
class DeltaProfile:
    """Fisher information as a function of the phase difference of the two paths.

    ``gamma_11[g]`` and ``gamma_12[g]`` are the expected negative Hessian entries
    at ``deltas[g] = 2*pi*g/G``; the diagonal estimate is symmetrized over both
    paths so that gamma_22 equals gamma_11.
    """

    deltas: np.ndarray
    gamma_11: np.ndarray
    gamma_12: np.ndarray
    stderr_11: np.ndarray
    stderr_12: np.ndarray

    @property
    def size(self) -> int:
        return int(self.deltas.shape[0])


@dataclass(frozen=True, eq=False)
class SymbolBlocks:
    """Per-symbol 2x2 Fisher blocks [[d11, d12], [d12, d22]] with standard errors."""

    d11: np.ndarray
    d12: np.ndarray
    d22: np.ndarray
    stderr_11: np.ndarray
    stderr_12: np.ndarray

    @property
    def n(self) -> int:
        return int(self.d11.shape[0])

    def matrix(self) -> np.ndarray:
        """Dense 2N x 2N Fisher term in [phi1, phi2] ordering."""
        return np.block([
            [np.diag(self.d11), np.diag(self.d12)],
            [np.diag(self.d12), np.diag(self.d22)],
        ])


@dataclass(frozen=True, eq=False)
class FisherBlocks:
    """Expected Fisher information E_phi[F(phi)] for one estimation mode.

    DA keeps one diagonal entry per symbol (``gamma_da``). MBCRB and NDA keep
    scalars shared by all symbols. NDA additionally keeps the Monte-Carlo
    profile over the phase difference, from which prior-weighted and
    common-phase terms are derived.
    """

    mode: EstimationMode
    gamma_da: np.ndarray | None = None
    gamma_scalar_11: float | None = None
    gamma_scalar_12: float | None = None
    gamma_scalar_22: float | None = None
    mc_meta: MonteCarloMeta | None = None
    profile: DeltaProfile | None = None
    averaging: DeltaAveraging = DeltaAveraging.UNIFORM

    def __post_init__(self) -> None:
        """Check that the fields required by the mode are present."""
        if self.mode is EstimationMode.DA and self.gamma_da is None:
            raise ValueError("DA Fisher blocks need per-symbol gamma_da entries")
        if self.mode is not EstimationMode.DA and self.gamma_scalar_11 is None:
            raise ValueError(f"{self.mode.value} Fisher blocks need gamma_scalar_11")

    @property
    def n(self) -> int | None:
        """Block length for DA blocks, None when the terms are shared by all symbols."""
        return None if self.gamma_da is None else int(self.gamma_da.shape[0])

    def with_averaging(self, averaging: DeltaAveraging) -> "FisherBlocks":
        """Return a copy that averages over the phase difference differently."""
        return replace(self, averaging=averaging)
