"""Constellation value object and symbol generation."""

import math
import re
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..services.random_streams import SeedLike, make_rng

_SQUARE_QAM = re.compile(r"^(\d+)-?QAM$")


@dataclass(frozen=True)
class Constellation:
    """Value object representing a finite complex symbol alphabet."""

    symbols: tuple[complex, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        """Validate the symbol set after creation."""
        if len(self.symbols) == 0:
            raise ValueError("Constellation must contain at least one symbol. Example: [1+0j] or 'QPSK'")

        values = np.asarray(self.symbols, dtype=np.complex128)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Constellation '{self.name}' contains non-finite symbols")

        energy = float(np.mean(np.abs(values) ** 2))
        if not energy > 0.0:
            raise ValueError(f"Constellation '{self.name}' has zero average energy; at least one symbol must be nonzero")

    @property
    def order(self) -> int:
        """Number of symbols M."""
        return len(self.symbols)

    @property
    def energy(self) -> float:
        """Average symbol energy E_s = mean |s|^2."""
        return float(np.mean(np.abs(self.points) ** 2))

    @property
    def points(self) -> np.ndarray:
        """Symbols as a complex128 array."""
        return np.asarray(self.symbols, dtype=np.complex128)

    @property
    def is_constant_modulus(self) -> bool:
        """True when every symbol has the same magnitude."""
        magnitudes = np.abs(self.points)
        return bool(np.allclose(magnitudes, magnitudes[0], rtol=1e-12, atol=0.0))

    def rotational_symmetries(self, tol: float = 1e-9) -> int:
        """Largest K such that a rotation by 2*pi/K maps the set onto itself.

        Returns:
            Rotational order K (1 when the set has no rotational symmetry)
        """
        points = self.points
        for k in range(self.order, 1, -1):
            rotated = points * np.exp(2j * np.pi / k)
            distances = np.abs(rotated[:, None] - points[None, :])
            if np.all(distances.min(axis=1) < tol):
                return k
        return 1

    def __str__(self) -> str:
        return self.name


def _square_qam(order: int) -> np.ndarray:
    side = math.isqrt(order)
    if side * side != order or side < 2 or side % 2:
        raise ValueError(f"Square QAM needs an order that is an even power of 2, got {order}. Example: 16QAM or 64QAM")
    levels = np.arange(-(side - 1), side, 2, dtype=np.float64)
    grid = levels[:, None] + 1j * levels[None, :]
    return grid.ravel()


def make_constellation(name: str | Sequence[complex]) -> Constellation:
    """Build a constellation from a label or a custom symbol list.

    Built-in labels (BPSK, QPSK, square M-QAM) are normalized to unit average
    energy. Custom symbol lists pass through unnormalized.

    Args:
        name: Label such as "QPSK" or "16QAM", or a sequence of complex symbols

    Returns:
        Constellation instance

    Raises:
        ValueError: If the label is unknown
    """
    if not isinstance(name, str):
        return Constellation(tuple(complex(s) for s in name), name="custom")

    label = name.strip().upper()
    if label == "BPSK":
        points = np.array([1.0, -1.0], dtype=np.complex128)
    elif label in ("QPSK", "4QAM"):
        points = np.array([1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j], dtype=np.complex128)
        label = "QPSK"
    else:
        match = _SQUARE_QAM.match(label)
        if match is None:
            raise ValueError(f"Unknown constellation '{name}'. Valid labels: BPSK, QPSK, 16QAM, 64QAM or a list of complex symbols")
        label = f"{match.group(1)}QAM"
        points = _square_qam(int(match.group(1)))

    points = points / np.sqrt(np.mean(np.abs(points) ** 2))
    return Constellation(tuple(complex(p) for p in points), name=label)


def draw_symbols(constellation: Constellation, n: int, seed: SeedLike) -> np.ndarray:
    """Draw n i.i.d. uniform symbols from the constellation.

    Args:
        constellation: Symbol alphabet
        n: Number of symbols (>= 1)
        seed: Integer seed, SeedSequence or Generator

    Returns:
        Complex array of shape (n,)
    """
    if n < 1:
        raise ValueError(f"Symbol count must be at least 1, got {n}")
    rng = make_rng(seed)
    indices = rng.integers(0, constellation.order, size=n)
    return constellation.points[indices]
