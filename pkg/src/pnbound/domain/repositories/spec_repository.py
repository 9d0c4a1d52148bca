"""Repository interface for experiment specifications."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from ...application.dto.experiment_spec import ExperimentSpec


class SpecRepository(ABC):
    """Abstract repository for loading experiment specifications."""

    @abstractmethod
    async def load_mapping(self, path: Path) -> dict[str, Any]:
        """Load the raw key/value mapping of a spec file.

        Args:
            path: Spec file location

        Returns:
            Flat mapping with environment variables substituted

        Raises:
            ConfigurationNotFoundError: If the file does not exist
            InvalidConfigurationError: If the file is not a flat mapping
        """
        pass

    @abstractmethod
    async def load_spec(self, path: Path) -> "ExperimentSpec":
        """Load and validate an experiment specification.

        Raises:
            ConfigurationError: If the file is missing or invalid
        """
        pass


class ConfigurationError(Exception):
    """Base exception for configuration errors."""
    pass


class ConfigurationNotFoundError(ConfigurationError):
    """Raised when a spec file is not found."""

    def __init__(self, config_path: Path | None = None):
        if config_path:
            message = f"Spec file not found: {config_path}"
        else:
            message = "No spec file given"
        super().__init__(message)
        self.config_path = config_path


class InvalidConfigurationError(ConfigurationError):
    """Raised when a spec is invalid."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class MissingEnvironmentVariableError(ConfigurationError):
    """Raised when a required environment variable is missing."""

    def __init__(self, variable_name: str):
        super().__init__(f"Required environment variable not found: {variable_name}")
        self.variable_name = variable_name
