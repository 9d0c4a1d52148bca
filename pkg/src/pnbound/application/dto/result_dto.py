"""Data Transfer Objects for sweep results, harness tables and run manifests."""

import math
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

CSV_COLUMNS: tuple[str, ...] = (
    "sweep_var_name",
    "sweep_value",
    "mode",
    "constellation",
    "n",
    "symbol_index",
    "bound_rad2",
    "bound_stderr_rad2",
    "sigma2_eps_tilde_rad2",
    "empirical_mse_rad2",
    "seed",
    "snr_db",
    "rho",
    "sigma2_zeta",
)

# Columns a result table must have for reporting
REQUIRED_COLUMNS: tuple[str, ...] = CSV_COLUMNS[:11]


@dataclass(frozen=True)
class SweepRow:
    """One bound (and optional empirical MSE) at one sweep point and symbol."""

    sweep_var_name: str
    sweep_value: float
    mode: str
    constellation: str
    n: int
    symbol_index: int
    bound_rad2: float
    bound_stderr_rad2: float
    sigma2_eps_tilde_rad2: float
    empirical_mse_rad2: float | None
    seed: int
    snr_db: float | None = None
    rho: float | None = None
    sigma2_zeta: float | None = None

    @property
    def has_empirical(self) -> bool:
        return self.empirical_mse_rad2 is not None

    def with_empirical(self, mse: float | None) -> "SweepRow":
        """Copy with the empirical MSE column filled in."""
        values = asdict(self)
        values["empirical_mse_rad2"] = mse
        return SweepRow(**values)


@dataclass(frozen=True)
class HarnessRow:
    """Empirical MAP estimator MSE against the matching bound."""

    mode: str
    constellation: str
    n: int
    snr_db: float
    rho: float
    sigma2_zeta: float
    symbol_index: int
    trials: int
    empirical_mse: float
    mse_stderr: float
    bound: float
    converged_fraction: float

    @property
    def gap_db(self) -> float:
        """10 log10(empirical MSE / bound)."""
        if self.bound <= 0 or self.empirical_mse <= 0:
            return math.nan
        return 10.0 * math.log10(self.empirical_mse / self.bound)

    @property
    def respects_bound(self) -> bool:
        """Empirical MSE is not below the bound by more than three standard errors."""
        return self.empirical_mse >= self.bound - 3.0 * self.mse_stderr


@dataclass
class RunManifest:
    """Self-describing record of one experiment run."""

    name: str
    seed: int
    version: str
    wall_time_s: float
    threads: int
    spec: dict[str, Any]
    files: list[str] = field(default_factory=list)
    created_at: datetime = field(default_factory=datetime.now)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a JSON-serializable dictionary."""
        return {
            "name": self.name,
            "seed": self.seed,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
            "threads": self.threads,
            "files": list(self.files),
            "created_at": self.created_at.isoformat(),
            "spec": self.spec,
        }


@dataclass
class RunExperimentResult:
    """Result of running an experiment."""

    name: str
    success: bool
    csv_files: list[Path] = field(default_factory=list)
    manifest_file: Path | None = None
    rows: int = 0
    wall_time_s: float = 0.0
    error: str | None = None

    @classmethod
    def success_result(
        cls,
        name: str,
        csv_files: list[Path],
        manifest_file: Path,
        rows: int,
        wall_time_s: float,
    ) -> "RunExperimentResult":
        """Create a successful run result."""
        return cls(
            name=name,
            success=True,
            csv_files=csv_files,
            manifest_file=manifest_file,
            rows=rows,
            wall_time_s=wall_time_s,
        )

    @classmethod
    def failure_result(cls, name: str, error: str) -> "RunExperimentResult":
        """Create a failed run result."""
        return cls(name=name, success=False, error=error)


@dataclass
class ReportResult:
    """Result of building a plot script and summary from result tables."""

    success: bool
    script_file: Path | None = None
    summary_file: Path | None = None
    summary_lines: list[str] = field(default_factory=list)
    error: str | None = None

    @classmethod
    def success_result(cls, script_file: Path, summary_file: Path, summary_lines: list[str]) -> "ReportResult":
        """Create a successful report result."""
        return cls(success=True, script_file=script_file, summary_file=summary_file, summary_lines=summary_lines)

    @classmethod
    def failure_result(cls, error: str) -> "ReportResult":
        """Create a failed report result."""
        return cls(success=False, error=error)
