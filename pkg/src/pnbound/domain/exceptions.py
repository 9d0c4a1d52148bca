"""Numerical error hierarchy for pnbound."""


class PnBoundError(Exception):
    """Base exception for pnbound domain failures."""

    def __init__(self, message: str, module: str = "pnbound"):
        super().__init__(message)
        self.module = module


class NumericalError(PnBoundError):
    """Raised when a numerical computation cannot produce a valid result."""
    pass


class DegenerateModelError(NumericalError):
    """Raised when the prior covariance is singular for the requested code path."""

    def __init__(self, message: str):
        super().__init__(message, module="pn_process")


class NotPositiveDefiniteError(NumericalError):
    """Raised when a Bayesian information matrix fails its Cholesky factorization."""

    def __init__(self, min_eigenvalue: float, size: int):
        super().__init__(
            f"Bayesian information matrix of size {size} is not positive definite "
            f"(smallest eigenvalue {min_eigenvalue:.6e})",
            module="bcrb_engine",
        )
        self.min_eigenvalue = min_eigenvalue
        self.size = size


class MonteCarloError(NumericalError):
    """Raised when a Monte-Carlo estimator hits non-finite samples."""

    def __init__(self, grid_index: int, bad_samples: int, delta: float):
        super().__init__(
            f"{bad_samples} non-finite Hessian samples at delta grid point "
            f"{grid_index} (delta={delta:.6f} rad)",
            module="fisher_information",
        )
        self.grid_index = grid_index
        self.bad_samples = bad_samples
        self.delta = delta
