"""Settings and configuration management for the pnbound CLI."""

import os
from pathlib import Path
from typing import Any

import structlog
from pydantic import Field
from pydantic_settings import BaseSettings

logger = structlog.get_logger()


class Settings(BaseSettings):
    """Global settings for the pnbound CLI application."""

    # Output
    out_dir: str = Field(
        default="results",
        description="Directory for result tables, manifests and plot scripts"
    )

    # Execution
    threads: int = Field(
        default_factory=lambda: max(1, min(os.cpu_count() or 1, 8)),
        description="Worker threads for Monte-Carlo and sweep evaluation"
    )
    seed: int | None = Field(
        default=None,
        description="Master seed overriding the spec file"
    )

    # Monte-Carlo budget overrides (None keeps the spec value)
    nda_samples: int | None = Field(
        default=None,
        description="NDA Monte-Carlo samples per delta grid point"
    )
    delta_grid: int | None = Field(
        default=None,
        description="Number of delta grid points for the NDA average"
    )
    estimator_trials: int | None = Field(
        default=None,
        description="Monte-Carlo trials of the MAP estimator harness"
    )

    # CLI behavior
    log_level: str = Field(
        default="INFO",
        description="Logging level"
    )
    verbose: bool = Field(
        default=False,
        description="Enable verbose output"
    )
    quiet: bool = Field(
        default=False,
        description="Suppress non-essential output"
    )
    no_color: bool = Field(
        default=False,
        description="Disable colored output"
    )

    class Config:
        """Pydantic configuration."""
        env_prefix = "PNBOUND_"
        env_file = ".env"
        case_sensitive = False
        extra = "ignore"

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        logger.debug("Settings initialized",
                     out_dir=self.out_dir,
                     threads=self.threads,
                     log_level=self.log_level)

    def get_out_dir(self) -> Path:
        """Resolved output directory (not created)."""
        return Path(self.out_dir).expanduser().resolve()

    def spec_overrides(self) -> dict[str, int]:
        """Spec keys set through the environment, ready to merge into a spec mapping."""
        overrides: dict[str, int] = {}
        for key in ("seed", "nda_samples", "delta_grid", "estimator_trials"):
            value = getattr(self, key)
            if value is not None:
                overrides[key] = value
        return overrides


# Global settings instance (will be initialized by CLI)
settings: Settings | None = None


def get_settings(**overrides: Any) -> Settings:
    """Get the global settings instance.

    Keyword overrides (CLI flags) rebuild the instance on top of the environment.
    """
    global settings
    if settings is None or overrides:
        settings = Settings(**overrides)
    return settings
