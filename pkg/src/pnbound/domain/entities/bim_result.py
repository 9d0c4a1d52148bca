"""Bayesian information matrix and the bounds read off its inverse."""

from dataclasses import dataclass

import numpy as np

from ..enums import EstimationMode


@dataclass(frozen=True, eq=False)
class BimResult:
    """Assembled BIM with per-symbol bound quantities.

    For the reduced rho = 1 model ``bim`` is the N x N information matrix of the
    common phase and ``bim_inv`` is its inverse expanded to the 2N x 2N error
    covariance of (phi1, phi2), whose blocks are all equal.
    """

    bim: np.ndarray
    bim_inv: np.ndarray
    mse_phi1: np.ndarray
    mse_phi2: np.ndarray
    cross_cov: np.ndarray
    sigma2_eps_tilde: np.ndarray
    mode: EstimationMode
    bound_stderr: np.ndarray | None = None
    reduced: bool = False

    @property
    def n(self) -> int:
        return int(self.mse_phi1.shape[0])

    def bound_at(self, symbol_index: int) -> float:
        """MSE bound of phi1 at a 1-based symbol index."""
        if not 1 <= symbol_index <= self.n:
            raise IndexError(f"Symbol index {symbol_index} outside 1..{self.n}")
        return float(self.mse_phi1[symbol_index - 1])

    def stderr_at(self, symbol_index: int) -> float:
        """Propagated Monte-Carlo standard error at a 1-based symbol index."""
        if self.bound_stderr is None:
            return 0.0
        return float(self.bound_stderr[symbol_index - 1])

    def error_covariance(self, symbol_index: int) -> np.ndarray:
        """2x2 bound covariance of (phi1_n, phi2_n) at a 1-based symbol index."""
        k = symbol_index - 1
        return np.array([
            [self.mse_phi1[k], self.cross_cov[k]],
            [self.cross_cov[k], self.mse_phi2[k]],
        ])
