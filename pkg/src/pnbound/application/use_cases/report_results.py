"""Use case for turning result tables into a plot script and a text summary."""

import math
from collections import defaultdict
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path

import structlog

from ...domain.enums import EstimationMode, SweepVariable
from ...domain.repositories.result_repository import ResultRepository
from ..dto.experiment_spec import format_short
from ..dto.result_dto import ReportResult, SweepRow

logger = structlog.get_logger()

# Builds plot script text from (table path, rows) pairs
ScriptBuilder = Callable[[list[tuple[Path, list[SweepRow]]]], str]


@dataclass
class ReportCommand:
    """Command to report on result tables."""
    csv_paths: list[Path]
    name: str = "report"


def _db(ratio: float) -> float:
    return 10.0 * math.log10(ratio) if ratio > 0 else math.nan


def _mode_order(mode: str) -> int:
    order = [EstimationMode.NDA.value, EstimationMode.MBCRB.value, EstimationMode.DA.value]
    return order.index(mode) if mode in order else len(order)


def _rho_lines(rows: list[SweepRow]) -> list[str]:
    """Bound improvement from the smallest to the largest rho, per mode and sigma2_zeta."""
    series: dict[str, dict[float, list[SweepRow]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        series[row.mode][row.sigma2_zeta if row.sigma2_zeta is not None else math.nan].append(row)

    lines = []
    for mode in sorted(series, key=_mode_order):
        improvements = []
        collapses = []
        for sigma2_zeta in sorted(series[mode]):
            ordered = sorted(series[mode][sigma2_zeta], key=lambda r: r.sweep_value)
            first, last = ordered[0], ordered[-1]
            label = format_short(sigma2_zeta)
            improvements.append(f"improvement(σ²_ζ={label}) = {_db(first.bound_rad2 / last.bound_rad2):.2f} dB")
            if first.sigma2_eps_tilde_rad2 > 0:
                ratio = last.sigma2_eps_tilde_rad2 / first.sigma2_eps_tilde_rad2
                collapses.append(f"eps_tilde_ratio(σ²_ζ={label}) = {ratio:.3g}")
        lines.append(f"{mode}: " + "; ".join(improvements))
        if collapses:
            lines.append(f"{mode}: " + "; ".join(collapses))
    return lines


def _snr_lines(rows: list[SweepRow]) -> list[str]:
    """Relative NDA to MBCRB gap at the ends of each SNR sweep."""
    by_mode: dict[str, dict[tuple[str, int, float], float]] = defaultdict(dict)
    for row in rows:
        by_mode[row.mode][(row.constellation, row.symbol_index, row.sweep_value)] = row.bound_rad2

    nda = by_mode.get(EstimationMode.NDA.value, {})
    mbcrb = by_mode.get(EstimationMode.MBCRB.value, {})
    common = sorted(set(nda) & set(mbcrb))
    if not common:
        return []

    lines = []
    for constellation, symbol in sorted({(c, k) for c, k, _ in common}):
        snrs = [snr for c, k, snr in common if c == constellation and k == symbol]
        gaps = []
        for snr in (min(snrs), max(snrs)):
            key = (constellation, symbol, snr)
            gaps.append(f"{format_short(snr)} dB: {100.0 * (nda[key] - mbcrb[key]) / nda[key]:.2f} %")
        lines.append(f"{constellation} symbol {symbol} relative gap (NDA-MBCRB)/NDA: " + ", ".join(gaps))
    return lines


def _symbol_lines(rows: list[SweepRow]) -> list[str]:
    """Center-symbol bound of each (mode, constellation, N) series."""
    lines = []
    series: dict[tuple[str, str, int], list[SweepRow]] = defaultdict(list)
    for row in rows:
        series[(row.mode, row.constellation, row.n)].append(row)
    for (mode, constellation, n), members in sorted(series.items(), key=lambda item: (_mode_order(item[0][0]), item[0][1:])):
        center = (n + 1) // 2
        match = [r for r in members if r.symbol_index == center]
        if match:
            lines.append(f"{mode} {constellation} N={n}: bound(symbol {center}) = {match[0].bound_rad2:.6e} rad^2")
    return lines


def summarize(tables: list[tuple[Path, list[SweepRow]]]) -> list[str]:
    """Text summary of result tables, grouped by sweep variable.

    ``rho`` sweeps report the dB improvement between the ends of the rho grid
    (10 log10 of the bound ratio); ``snr_db`` sweeps report the relative NDA to
    MBCRB gap; symbol sweeps report the center-symbol bound.
    """
    by_sweep: dict[str, list[SweepRow]] = defaultdict(list)
    for _, rows in tables:
        for row in rows:
            by_sweep[row.sweep_var_name].append(row)

    lines: list[str] = []
    if SweepVariable.RHO.value in by_sweep:
        lines += _rho_lines(by_sweep[SweepVariable.RHO.value])
    if SweepVariable.SNR_DB.value in by_sweep:
        lines += _snr_lines(by_sweep[SweepVariable.SNR_DB.value])
    if SweepVariable.SYMBOL_INDEX.value in by_sweep:
        lines += _symbol_lines(by_sweep[SweepVariable.SYMBOL_INDEX.value])

    empirical = sum(1 for _, rows in tables for row in rows if row.has_empirical)
    if empirical:
        lines.append(f"empirical MSE rows: {empirical}")
    return lines


class ReportResultsUseCase:
    """Use case for building a plot script and summary from result tables."""

    def __init__(self, result_repository: ResultRepository, script_builder: ScriptBuilder):
        self._result_repository = result_repository
        self._script_builder = script_builder

    async def execute(self, command: ReportCommand) -> ReportResult:
        """Execute the report use case.

        Raises:
            ReportSchemaError: If a table lacks a required column
            FileNotFoundError: If a table does not exist
        """
        if not command.csv_paths:
            return ReportResult.failure_result("No result tables given")

        tables = [(path, await self._result_repository.load_rows(path)) for path in command.csv_paths]
        logger.info("Loaded result tables", tables=len(tables), rows=sum(len(rows) for _, rows in tables))

        script = self._script_builder(tables)
        summary_lines = summarize(tables)

        script_file = await self._result_repository.save_text(f"{command.name}.gp", script)
        summary_file = await self._result_repository.save_text(
            f"{command.name}_summary.txt", "\n".join(summary_lines) + "\n"
        )

        logger.info("Report written", script=str(script_file), summary_lines=len(summary_lines))
        return ReportResult.success_result(script_file, summary_file, summary_lines)
