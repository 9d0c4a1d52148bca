"""Application use cases."""

from .bound_sweep import SweepTable, bound_sweep, evaluate_point
from .mse_harness import HarnessOutcome, harness_point, mse_harness
from .report_results import ReportCommand, ReportResultsUseCase, summarize
from .run_experiment import RunExperimentCommand, RunExperimentUseCase

__all__ = [
    "HarnessOutcome",
    "ReportCommand",
    "ReportResultsUseCase",
    "RunExperimentCommand",
    "RunExperimentUseCase",
    "SweepTable",
    "bound_sweep",
    "evaluate_point",
    "harness_point",
    "mse_harness",
    "summarize",
]
