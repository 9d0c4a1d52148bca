"""Per-sample log-likelihoods of the two-path observation and their derivatives.

For a known symbol s the observation is complex Gaussian with mean
mu = a1 + a2, a_i = s h_i exp(j phi_i), and variance sigma2_w. With the residual
r = y - mu the data-aided terms are

    log f    = -log(pi sigma2_w) - |r|^2 / sigma2_w
    d/dphi_i = (2 / sigma2_w) Im{r conj(a_i)}
    d2/dphi_i^2       = -(2 / sigma2_w) (|a_i|^2 + Re{r conj(a_i)})
    d2/dphi_1 dphi_2  = -(2 / sigma2_w) Re{a2 conj(a1)}

The non-data-aided likelihood is the uniform mixture over the constellation,
evaluated with log-sum-exp; its derivatives follow from the quotient rule with
the posterior symbol weights.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import logsumexp, softmax

from ..enums import EstimationMode
from ..value_objects.constellation import Constellation


class LikelihoodTerms(NamedTuple):
    """Log-likelihood with gradient and Hessian entries, all broadcast arrays."""

    loglik: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    h11: np.ndarray
    h12: np.ndarray
    h22: np.ndarray


@dataclass(frozen=True)
class SampleLikelihoodContext:
    """Everything needed to evaluate the likelihood of one received sample."""

    y_n: complex
    sigma2_w: float
    s_n: complex | None = None
    constellation: Constellation | None = None
    h1: complex = 1 + 0j
    h2: complex = 1 + 0j

    def __post_init__(self) -> None:
        """Validate the noise variance after creation."""
        if not self.sigma2_w > 0:
            raise ValueError(f"sigma2_w must be > 0, got {self.sigma2_w}")


def _symbol_terms(
    y: np.ndarray,
    s: np.ndarray,
    phi1: np.ndarray,
    phi2: np.ndarray,
    sigma2_w: float,
    h1: complex,
    h2: complex,
) -> LikelihoodTerms:
    a1 = s * h1 * np.exp(1j * phi1)
    a2 = s * h2 * np.exp(1j * phi2)
    r = y - a1 - a2
    scale = 2.0 / sigma2_w

    loglik = -np.log(np.pi * sigma2_w) - np.abs(r) ** 2 / sigma2_w
    ra1 = r * np.conj(a1)
    ra2 = r * np.conj(a2)
    return LikelihoodTerms(
        loglik=loglik,
        g1=scale * ra1.imag,
        g2=scale * ra2.imag,
        h11=-scale * (np.abs(a1) ** 2 + ra1.real),
        h12=-scale * (a2 * np.conj(a1)).real,
        h22=-scale * (np.abs(a2) ** 2 + ra2.real),
    )


def da_terms(
    y: ArrayLike,
    s: ArrayLike,
    phi1: ArrayLike,
    phi2: ArrayLike,
    sigma2_w: float,
    h1: complex = 1,
    h2: complex = 1,
) -> LikelihoodTerms:
    """Vectorized data-aided log-likelihood, gradient and Hessian entries."""
    return _symbol_terms(
        np.asarray(y), np.asarray(s), np.asarray(phi1), np.asarray(phi2), sigma2_w, h1, h2
    )


def nda_terms(
    y: ArrayLike,
    points: np.ndarray,
    phi1: ArrayLike,
    phi2: ArrayLike,
    sigma2_w: float,
    h1: complex = 1,
    h2: complex = 1,
) -> LikelihoodTerms:
    """Vectorized non-data-aided terms for the uniform mixture over ``points``.

    The symbol axis is appended as the last axis and reduced away.
    """
    per_symbol = _symbol_terms(
        np.asarray(y)[..., None],
        np.asarray(points),
        np.asarray(phi1)[..., None],
        np.asarray(phi2)[..., None],
        sigma2_w,
        h1,
        h2,
    )
    lse = logsumexp(per_symbol.loglik, axis=-1)
    weights = softmax(per_symbol.loglik, axis=-1)

    g1_bar = np.sum(weights * per_symbol.g1, axis=-1)
    g2_bar = np.sum(weights * per_symbol.g2, axis=-1)
    h11 = np.sum(weights * (per_symbol.h11 + per_symbol.g1 ** 2), axis=-1) - g1_bar ** 2
    h12 = np.sum(weights * (per_symbol.h12 + per_symbol.g1 * per_symbol.g2), axis=-1) - g1_bar * g2_bar
    h22 = np.sum(weights * (per_symbol.h22 + per_symbol.g2 ** 2), axis=-1) - g2_bar ** 2

    return LikelihoodTerms(
        loglik=lse - np.log(points.shape[-1]),
        g1=g1_bar,
        g2=g2_bar,
        h11=h11,
        h12=h12,
        h22=h22,
    )


def _require_symbol(ctx: SampleLikelihoodContext) -> complex:
    if ctx.s_n is None:
        raise ValueError("Data-aided likelihood needs the transmitted symbol s_n")
    return ctx.s_n


def _require_constellation(ctx: SampleLikelihoodContext) -> Constellation:
    if ctx.constellation is None:
        raise ValueError("Non-data-aided likelihood needs the constellation")
    return ctx.constellation


def loglik_da(ctx: SampleLikelihoodContext, phi1: float, phi2: float) -> float:
    """Data-aided log-density of y_n given both phases and the known symbol."""
    terms = da_terms(ctx.y_n, _require_symbol(ctx), phi1, phi2, ctx.sigma2_w, ctx.h1, ctx.h2)
    return float(terms.loglik)


def loglik_nda(ctx: SampleLikelihoodContext, phi1: float, phi2: float) -> float:
    """Non-data-aided log-density, averaging over equiprobable symbols."""
    points = _require_constellation(ctx).points
    terms = nda_terms(ctx.y_n, points, phi1, phi2, ctx.sigma2_w, ctx.h1, ctx.h2)
    return float(terms.loglik)


def loglik_derivs(
    ctx: SampleLikelihoodContext,
    phi1: float,
    phi2: float,
    mode: EstimationMode,
) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradient and Hessian of the log-likelihood in (phi1, phi2).

    Args:
        ctx: Sample context
        phi1: Phase of path 1 (rad)
        phi2: Phase of path 2 (rad)
        mode: EstimationMode.DA or EstimationMode.NDA

    Returns:
        Tuple of gradient (2,) and symmetric Hessian (2, 2)
    """
    if mode is EstimationMode.DA:
        terms = da_terms(ctx.y_n, _require_symbol(ctx), phi1, phi2, ctx.sigma2_w, ctx.h1, ctx.h2)
    elif mode is EstimationMode.NDA:
        points = _require_constellation(ctx).points
        terms = nda_terms(ctx.y_n, points, phi1, phi2, ctx.sigma2_w, ctx.h1, ctx.h2)
    else:
        raise ValueError(f"Likelihood derivatives are defined for DA and NDA, got {mode.value}")

    gradient = np.array([float(terms.g1), float(terms.g2)])
    h12 = float(terms.h12)
    hessian = np.array([[float(terms.h11), h12], [h12, float(terms.h22)]])
    return gradient, hessian
