"""Received-signal model y_n = s_n (h1 e^{j phi1_n} + h2 e^{j phi2_n}) + w_n."""

import numpy as np

from ..entities.phase_trajectories import PhaseTrajectories, ReceivedBlock
from ..value_objects.pn_config import ChannelConfig
from .random_streams import SeedLike, make_rng


def complex_noise(size: int | tuple[int, ...], sigma2_w: float, rng: np.random.Generator) -> np.ndarray:
    """Circularly-symmetric complex Gaussian noise with total variance sigma2_w."""
    scale = np.sqrt(sigma2_w / 2.0)
    draws = rng.standard_normal((2, *np.atleast_1d(size)))
    return scale * (draws[0] + 1j * draws[1])


def observe_block(
    phases: PhaseTrajectories,
    symbols: np.ndarray,
    channel: ChannelConfig,
    sigma2_w: float,
    seed: SeedLike,
    keep_symbols: bool = True,
) -> ReceivedBlock:
    """Pass a symbol block through both phase-rotated paths and add noise.

    Args:
        phases: True phase trajectories
        symbols: Transmitted symbols, same length as the trajectories
        channel: Known channel gains
        sigma2_w: Complex noise variance
        seed: Seed for the noise stream
        keep_symbols: Attach the symbols to the block (data-aided scenarios)

    Returns:
        ReceivedBlock carrying the true phases
    """
    rng = make_rng(seed)
    mean = symbols * (channel.h1 * np.exp(1j * phases.phi1) + channel.h2 * np.exp(1j * phases.phi2))
    y = mean + complex_noise(phases.n, sigma2_w, rng)
    return ReceivedBlock(y=y, s=symbols if keep_symbols else None, phases=phases)
