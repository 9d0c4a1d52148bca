"""YAML-based experiment spec repository."""

import os
import re
from pathlib import Path
from typing import Any

import structlog
import yaml

from ...application.dto.experiment_spec import ExperimentSpec, parse_spec
from ...domain.repositories.spec_repository import (
    ConfigurationNotFoundError,
    InvalidConfigurationError,
    MissingEnvironmentVariableError,
    SpecRepository,
)

logger = structlog.get_logger()


class YamlSpecRepository(SpecRepository):
    """Flat YAML spec files with environment variable substitution.

    ``${VAR}`` is replaced by the variable's value and fails if it is unset;
    ``${VAR:default}`` falls back to the default.
    """

    def __init__(self, overrides: dict[str, Any] | None = None):
        """Initialize the repository.

        Args:
            overrides: Spec keys that replace the file's values after loading
        """
        self._overrides = dict(overrides or {})
        self._env_var_pattern = re.compile(r'\$\{([^}]+)\}')

    async def load_mapping(self, path: Path) -> dict[str, Any]:
        """Load a spec file as a flat mapping."""
        path = Path(path)
        if not path.exists():
            logger.warning("Spec file not found", path=str(path))
            raise ConfigurationNotFoundError(path)

        with open(path, encoding='utf-8') as f:
            content = f.read()

        content = self._substitute_environment_variables(content)

        try:
            mapping = yaml.safe_load(content)
        except yaml.YAMLError as e:
            logger.error("Failed to parse spec file", path=str(path), error=str(e))
            raise InvalidConfigurationError(f"Spec file {path} is not valid YAML: {e}") from e

        if mapping is None:
            mapping = {}
        if not isinstance(mapping, dict):
            raise InvalidConfigurationError(f"Spec file {path} must contain a key/value mapping")

        for key, value in mapping.items():
            if isinstance(value, dict):
                raise InvalidConfigurationError(
                    f"Spec key '{key}' holds a nested mapping; specs are flat key/value files",
                    field=str(key),
                )

        logger.debug("Loaded spec mapping", path=str(path), keys=sorted(mapping))
        return mapping

    async def load_spec(self, path: Path) -> ExperimentSpec:
        """Load, override and validate a spec file."""
        mapping = await self.load_mapping(path)
        mapping.update(self._overrides)
        spec = parse_spec(mapping)

        logger.info("Loaded experiment spec",
                    path=str(path),
                    name=spec.name,
                    modes=[m.value for m in spec.mode],
                    sweep=spec.sweep_variable.value)
        return spec

    def _substitute_environment_variables(self, content: str) -> str:
        """Substitute ${VAR} and ${VAR:default} placeholders.

        Raises:
            MissingEnvironmentVariableError: If a variable without default is unset
        """
        def replace_var(match: re.Match) -> str:
            var_expr = match.group(1)

            if ':' in var_expr:
                var_name, default_value = var_expr.split(':', 1)
                return os.getenv(var_name.strip(), default_value)

            var_name = var_expr.strip()
            value = os.getenv(var_name)
            if value is None:
                raise MissingEnvironmentVariableError(var_name)
            return value

        substituted = self._env_var_pattern.sub(replace_var, content)

        if substituted != content:
            logger.debug("Substituted environment variables",
                         count=len(self._env_var_pattern.findall(content)))

        return substituted
