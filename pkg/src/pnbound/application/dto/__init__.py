"""Data transfer objects."""

from .experiment_spec import ExperimentSpec, format_short, parse_grid, parse_spec
from .result_dto import (
    CSV_COLUMNS,
    REQUIRED_COLUMNS,
    HarnessRow,
    ReportResult,
    RunExperimentResult,
    RunManifest,
    SweepRow,
)

__all__ = [
    "CSV_COLUMNS",
    "REQUIRED_COLUMNS",
    "ExperimentSpec",
    "HarnessRow",
    "ReportResult",
    "RunExperimentResult",
    "RunManifest",
    "SweepRow",
    "format_short",
    "parse_grid",
    "parse_spec",
]
