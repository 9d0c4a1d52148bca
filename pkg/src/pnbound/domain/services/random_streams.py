"""Reproducible random streams derived from a master seed.

Every randomized operation takes a seed and derives its generator here. A
stream is identified by the master seed plus a tuple of integer keys (for
example ``(stream_id, grid_index, chunk_index)``), which maps to
``SeedSequence(entropy=master, spawn_key=keys)``. The same (master, keys) pair
always yields the same stream, independent of thread scheduling.
"""

import numpy as np

SeedLike = int | np.random.SeedSequence | np.random.Generator

# Stream identifiers used as the first spawn key
SYMBOL_STREAM = 1
TRAJECTORY_STREAM = 2
NOISE_STREAM = 3
NDA_GAMMA_STREAM = 4
HARNESS_STREAM = 5
AMPLITUDE_STREAM = 6
FISHER_ORACLE_STREAM = 7


def derive_seed(seed: int | np.random.SeedSequence, *keys: int) -> np.random.SeedSequence:
    """Derive a child seed sequence for the stream identified by keys."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(
            entropy=seed.entropy,
            spawn_key=tuple(seed.spawn_key) + tuple(int(k) for k in keys),
        )
    if int(seed) < 0:
        raise ValueError(f"Seed must be a non-negative integer, got {seed}")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))


def make_rng(seed: SeedLike, *keys: int) -> np.random.Generator:
    """Create a Generator for (seed, keys).

    A Generator passed in is returned unchanged and cannot be combined with keys.
    """
    if isinstance(seed, np.random.Generator):
        if keys:
            raise ValueError("Stream keys cannot be applied to an existing Generator")
        return seed
    return np.random.default_rng(derive_seed(seed, *keys))
