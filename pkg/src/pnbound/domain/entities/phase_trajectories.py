"""Sampled phase paths and received blocks."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PhaseTrajectories:
    """Unwrapped sum phases seen by the receiver from each transmitter (rad)."""

    phi1: np.ndarray
    phi2: np.ndarray

    def __post_init__(self) -> None:
        """Validate trajectory shapes after creation."""
        if self.phi1.ndim != 1 or self.phi1.shape != self.phi2.shape:
            raise ValueError(f"Phase paths must be 1-D and of equal length, got {self.phi1.shape} and {self.phi2.shape}")
        if not (np.all(np.isfinite(self.phi1)) and np.all(np.isfinite(self.phi2))):
            raise ValueError("Phase paths must be finite")

    @property
    def n(self) -> int:
        """Block length."""
        return int(self.phi1.shape[0])

    def stacked(self) -> np.ndarray:
        """Phases as one vector [phi1_1..N, phi2_1..N]."""
        return np.concatenate([self.phi1, self.phi2])


@dataclass(frozen=True, eq=False)
class ReceivedBlock:
    """One block of received samples with optional side information."""

    y: np.ndarray
    s: np.ndarray | None = None
    phases: PhaseTrajectories | None = None

    def __post_init__(self) -> None:
        """Validate that every present sequence has the block length."""
        if self.y.ndim != 1 or self.y.shape[0] < 1:
            raise ValueError(f"Received samples must be a non-empty 1-D array, got shape {self.y.shape}")
        if self.s is not None and self.s.shape != self.y.shape:
            raise ValueError(f"Symbol sequence length {self.s.shape[0]} does not match block length {self.n}")
        if self.phases is not None and self.phases.n != self.n:
            raise ValueError(f"Phase trajectory length {self.phases.n} does not match block length {self.n}")

    @property
    def n(self) -> int:
        """Block length."""
        return int(self.y.shape[0])

    @property
    def has_symbols(self) -> bool:
        """True in data-aided scenarios."""
        return self.s is not None
