"""Gaussian prior on the stacked phase vector."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PriorModel:
    """Prior covariance and precision of the phase vector.

    The general model orders the phases as [phi1_1..N, phi2_1..N] and factors as
    ``cov = kron(a_matrix, k_matrix)``. The reduced model (rho = 1) describes a
    single common phase of length N with ``a_matrix = [[2]]``.
    """

    cov: np.ndarray
    precision: np.ndarray
    a_matrix: np.ndarray
    a_inverse: np.ndarray
    k_matrix: np.ndarray
    k_precision: np.ndarray
    rho: float
    sigma2_zeta: float
    sigma2_init: float
    n: int
    reduced: bool = False

    @property
    def dimension(self) -> int:
        """Number of phase parameters (2N, or N for the reduced model)."""
        return int(self.cov.shape[0])

    def variances(self) -> np.ndarray:
        """Prior variance of the first path at each symbol."""
        return np.diag(self.cov)[: self.n].copy()

    def delta_variance(self) -> np.ndarray:
        """Prior variance of phi1_n - phi2_n for each symbol."""
        if self.reduced:
            return np.zeros(self.n)
        k_diag = np.diag(self.k_matrix)
        return (self.a_matrix[0, 0] + self.a_matrix[1, 1] - 2.0 * self.a_matrix[0, 1]) * k_diag
