"""Outcome of a MAP phase estimation run."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class MapResult:
    """MAP phase estimates for one block."""

    phi1_hat: np.ndarray
    phi2_hat: np.ndarray
    converged: bool
    iterations: int
    gradient_norm: float
    objective: float

    @property
    def n(self) -> int:
        return int(self.phi1_hat.shape[0])
