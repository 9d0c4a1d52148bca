from .result_repository import ReportSchemaError, ResultRepository
from .spec_repository import (
    ConfigurationError,
    ConfigurationNotFoundError,
    InvalidConfigurationError,
    MissingEnvironmentVariableError,
    SpecRepository,
)

__all__ = [
    "ConfigurationError",
    "ConfigurationNotFoundError",
    "InvalidConfigurationError",
    "MissingEnvironmentVariableError",
    "ReportSchemaError",
    "ResultRepository",
    "SpecRepository",
]
