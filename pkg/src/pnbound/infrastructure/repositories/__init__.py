"""Repository implementations."""

from .csv_result_repository import CsvResultRepository
from .yaml_spec_repository import YamlSpecRepository

__all__ = ["CsvResultRepository", "YamlSpecRepository"]
