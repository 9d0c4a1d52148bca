"""pnbound - Bayesian Cramer-Rao bounds for phase-noise estimation in CoMP downlinks."""

import importlib.metadata

try:
    __version__ = importlib.metadata.version("pnbound")
except importlib.metadata.PackageNotFoundError:
    # Fallback for development/editable installs
    __version__ = "0.0.0+dev"

__author__ = "pnbound Team"
__description__ = "Bayesian Cramer-Rao bounds for phase-noise estimation in CoMP downlinks"

__all__ = [
    "__version__",
    "__author__",
    "__description__"
]
