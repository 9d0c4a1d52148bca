"""Domain enums for pnbound."""

from enum import Enum


class EstimationMode(Enum):
    """Which Fisher information term enters the Bayesian information matrix."""

    DA = "DA"
    MBCRB = "MBCRB"
    NDA = "NDA"

    @classmethod
    def from_string(cls, value: str) -> "EstimationMode":
        """Create EstimationMode from a case-insensitive label.

        Raises:
            ValueError: If the label is not a known mode
        """
        try:
            return cls(value.strip().upper())
        except ValueError:
            valid_modes = [m.value for m in cls]
            raise ValueError(f"Unknown mode '{value}'. Valid modes: {valid_modes}") from None


class DeltaAveraging(Enum):
    """How the Fisher term is averaged over the phase difference of the two paths."""

    UNIFORM = "uniform"
    PRIOR = "prior"


class SweepVariable(Enum):
    """Quantity on the x-axis of a bound table."""

    SNR_DB = "snr_db"
    RHO = "rho"
    SIGMA2_ZETA = "sigma2_zeta"
    SYMBOL_INDEX = "symbol_index"
