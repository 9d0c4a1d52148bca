"""Phase-noise and channel configuration value objects."""

import math
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_SIGMA2_INIT = 1e4


@dataclass(frozen=True)
class PnConfig:
    """Wiener phase-noise configuration for one block.

    Attributes:
        sigma2_zeta: Per-step innovation variance of one oscillator (rad^2)
        rho: Synchronization factor between the two transmit oscillators
        sigma2_init: Initial-phase variance (rad^2)
        n: Block length in symbols
    """

    sigma2_zeta: float
    rho: float
    sigma2_init: float = DEFAULT_SIGMA2_INIT
    n: int = 100

    def __post_init__(self) -> None:
        """Validate configuration values after creation."""
        if not math.isfinite(self.sigma2_zeta) or self.sigma2_zeta < 0:
            raise ValueError(f"sigma2_zeta must be a finite value >= 0 rad^2, got {self.sigma2_zeta}. Example: 1e-3")

        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}. Use 0 for free-running and 1 for fully synchronized oscillators")

        if not math.isfinite(self.sigma2_init) or self.sigma2_init <= 0:
            raise ValueError(f"sigma2_init must be a finite value > 0 rad^2, got {self.sigma2_init}. Example: 1e4 for a non-informative prior")

        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"Block length n must be an integer >= 1, got {self.n!r}")

    @property
    def is_synchronized(self) -> bool:
        """True when the transmit oscillators are fully synchronized (rho = 1)."""
        return self.rho == 1.0

    def with_rho(self, rho: float) -> "PnConfig":
        """Return a copy with a different synchronization factor."""
        return replace(self, rho=rho)

    def delta_variance(self) -> np.ndarray:
        """Prior variance of the phase difference of the two paths at each symbol."""
        steps = np.arange(self.n, dtype=np.float64)
        return 2.0 * (1.0 - self.rho) * (self.sigma2_init + self.sigma2_zeta * steps)


@dataclass(frozen=True)
class ChannelConfig:
    """Known channel gains and signal-to-noise ratio.

    SNR is E_s / sigma2_w, per transmitted symbol over complex noise variance.
    """

    snr_db: float
    h1: complex = 1 + 0j
    h2: complex = 1 + 0j

    def __post_init__(self) -> None:
        """Validate channel values after creation."""
        if not math.isfinite(self.snr_db):
            raise ValueError(f"snr_db must be finite, got {self.snr_db}. Example: 15.0")

        for label, gain in (("h1", self.h1), ("h2", self.h2)):
            if not (math.isfinite(gain.real) and math.isfinite(gain.imag)):
                raise ValueError(f"Channel gain {label} must be finite, got {gain}")

    def noise_variance(self, energy: float = 1.0) -> float:
        """Complex noise variance sigma2_w = E_s / 10^(snr_db/10)."""
        sigma2_w = energy / 10.0 ** (self.snr_db / 10.0)
        if not sigma2_w > 0.0:
            raise ValueError(f"Derived noise variance must be > 0, got {sigma2_w} (E_s={energy}, snr_db={self.snr_db})")
        return sigma2_w

    @property
    def unit_gains(self) -> bool:
        """True when both channel gains equal 1."""
        return self.h1 == 1 and self.h2 == 1
