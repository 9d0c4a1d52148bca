"""Figure-reproduction presets.

Every preset is a plain spec mapping so that it flows through the same
validation as a spec file and can be echoed verbatim into the run manifest.
Presets use QPSK unless they compare constellations.
"""

from typing import Any

from ...domain.repositories.spec_repository import InvalidConfigurationError
from ..dto.experiment_spec import ExperimentSpec, parse_spec

# Largest rho on the general (invertible) path
RHO_NEAR_ONE = 1.0 - 1e-6

_RHO_SWEEP = [round(0.1 * k, 1) for k in range(10)] + [RHO_NEAR_ONE]

PRESETS: dict[str, dict[str, Any]] = {
    "fig2": {
        "name": "fig2",
        "mode": ["NDA", "MBCRB"],
        "constellation": ["QPSK", "16QAM"],
        "n": [20, 100],
        "snr_db": 5.0,
        "rho": 0.5,
        "sigma2_zeta": 1e-3,
        "report": "all",
    },
    "fig3": {
        "name": "fig3",
        "mode": ["NDA", "MBCRB"],
        "constellation": "QPSK",
        "n": 100,
        "snr_db": "0:30:2",
        "rho": 0.1,
        "sigma2_zeta": 1e-3,
        "report": 50,
        "sweep": "snr_db",
    },
    "fig4": {
        "name": "fig4",
        "mode": ["NDA", "MBCRB"],
        "constellation": "QPSK",
        "n": 100,
        "snr_db": 15.0,
        "rho": _RHO_SWEEP,
        "sigma2_zeta": [1e-3, 1e-2],
        "report": 50,
        "sweep": "rho",
    },
    "fig5": {
        "name": "fig5",
        "mode": ["NDA"],
        "constellation": "QPSK",
        "n": 100,
        "snr_db": 15.0,
        "rho": _RHO_SWEEP,
        "sigma2_zeta": [1e-3, 1e-2],
        "report": 50,
        "sweep": "rho",
    },
}


def preset_names() -> list[str]:
    """Names of the shipped presets."""
    return sorted(PRESETS)


def get_preset(name: str) -> ExperimentSpec:
    """Validated spec of a named preset.

    Raises:
        InvalidConfigurationError: If no preset has that name
    """
    key = name.strip().lower()
    if key not in PRESETS:
        raise InvalidConfigurationError(
            f"Unknown preset '{name}'. Available presets: {', '.join(preset_names())}",
            field="preset",
        )
    return parse_spec(PRESETS[key])
