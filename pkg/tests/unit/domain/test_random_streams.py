"""Unit tests for seeded random streams."""

import numpy as np
import pytest

from pnbound.domain.services.random_streams import derive_seed, make_rng


class TestRandomStreams:
    """Unit tests for derive_seed and make_rng."""

    def test_same_keys_same_stream(self) -> None:
        """Test identical (seed, keys) give identical draws."""
        a = make_rng(7, 1, 2).standard_normal(10)
        b = make_rng(7, 1, 2).standard_normal(10)
        assert np.array_equal(a, b)

    def test_different_keys_differ(self) -> None:
        """Test different keys give different streams."""
        a = make_rng(7, 1, 2).standard_normal(10)
        b = make_rng(7, 1, 3).standard_normal(10)
        assert not np.array_equal(a, b)

    def test_derive_from_seed_sequence_appends_keys(self) -> None:
        """Test deriving from a SeedSequence extends its spawn key."""
        parent = derive_seed(3, 5)
        child = derive_seed(parent, 9)
        assert child.spawn_key == (5, 9)
        assert np.array_equal(
            np.random.default_rng(child).integers(0, 1000, 5),
            make_rng(3, 5, 9).integers(0, 1000, 5),
        )

    def test_generator_passes_through(self) -> None:
        """Test a Generator is returned unchanged."""
        rng = np.random.default_rng(0)
        assert make_rng(rng) is rng
        with pytest.raises(ValueError, match="cannot be applied"):
            make_rng(rng, 1)

    def test_negative_seed_raises(self) -> None:
        """Test negative seeds are rejected."""
        with pytest.raises(ValueError, match="non-negative"):
            derive_seed(-1)
