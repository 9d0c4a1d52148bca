"""Repository interface for bound tables and run manifests."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ...application.dto.result_dto import RunManifest, SweepRow


class ResultRepository(ABC):
    """Abstract repository for experiment results."""

    @abstractmethod
    async def save_rows(self, name: str, rows: list["SweepRow"]) -> Path:
        """Write one result table and return its path."""
        pass

    @abstractmethod
    async def save_manifest(self, manifest: "RunManifest") -> Path:
        """Write the run manifest and return its path."""
        pass

    @abstractmethod
    async def load_rows(self, path: Path) -> list["SweepRow"]:
        """Read a result table written by :meth:`save_rows`.

        Raises:
            ReportSchemaError: If a required column is missing
        """
        pass

    @abstractmethod
    async def save_text(self, name: str, content: str) -> Path:
        """Write a text artifact (plot script, summary) and return its path."""
        pass


class ReportSchemaError(Exception):
    """Raised when a result table lacks a required column."""

    def __init__(self, missing_column: str, path: Path | None = None):
        location = f" in {path}" if path else ""
        super().__init__(f"Result table is missing column '{missing_column}'{location}")
        self.missing_column = missing_column
        self.path = path
