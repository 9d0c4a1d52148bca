"""Experiment commands for the pnbound CLI."""

import asyncio
import json
from pathlib import Path
from typing import Any, NoReturn

import structlog
import typer
from rich.console import Console
from rich.table import Table

from ... import __version__
from ...application.dto.experiment_spec import ExperimentSpec, parse_grid
from ...application.dto.result_dto import HarnessRow, ReportResult, RunExperimentResult
from ...application.services.presets import PRESETS, get_preset, preset_names
from ...application.use_cases.mse_harness import mse_harness
from ...application.use_cases.report_results import ReportCommand, ReportResultsUseCase
from ...application.use_cases.run_experiment import RunExperimentCommand, RunExperimentUseCase
from ...config.settings import Settings
from ...domain.exceptions import NumericalError
from ...domain.repositories.result_repository import ReportSchemaError
from ...domain.repositories.spec_repository import ConfigurationError, InvalidConfigurationError
from ...domain.services.amplitude_noise import ApproximationError, validate_approximations
from ...infrastructure.reporting.gnuplot_script import build_gnuplot_script
from ...infrastructure.repositories.csv_result_repository import CsvResultRepository
from ...infrastructure.repositories.yaml_spec_repository import YamlSpecRepository
from ..formatters.output_format import OutputFormat
from ..utils.rich_utils import (
    create_error_panel,
    create_info_panel,
    create_success_panel,
    format_gap_db,
    format_rad2,
)

logger = structlog.get_logger()
console = Console()

EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_ERROR = 3


def print_json(data: Any) -> None:
    """Print JSON without markup, highlighting or wrapping."""
    console.print(json.dumps(data, indent=2), markup=False, highlight=False, soft_wrap=True)


def parse_estimator_flag(value: str | None) -> bool | None:
    """Map ``on``/``off`` to a bool; None keeps the spec value."""
    if value is None:
        return None
    normalized = value.strip().lower()
    if normalized in ("on", "true", "yes", "1"):
        return True
    if normalized in ("off", "false", "no", "0"):
        return False
    raise InvalidConfigurationError(f"Invalid value for '--estimator': expected on or off, got '{value}'", field="estimator")


def build_overrides(settings: Settings | None, **flags: Any) -> dict[str, Any]:
    """Spec overrides from the environment, then from command-line flags."""
    overrides: dict[str, Any] = dict(settings.spec_overrides()) if settings else {}
    overrides.update({key: value for key, value in flags.items() if value is not None})
    return overrides


def grid_option(field: str, text: str) -> list[float]:
    """Grid from a command-line value: comma list, single value or start:stop:step."""
    try:
        if "," in text:
            return parse_grid([part.strip() for part in text.split(",") if part.strip()])
        return parse_grid(text)
    except ValueError as e:
        raise InvalidConfigurationError(f"Invalid value for '{field}': {e}", field=field) from e


def resolve_threads(settings: Settings | None, threads: int | None) -> int:
    if threads is not None:
        if threads < 1:
            raise InvalidConfigurationError("Invalid value for '--threads': must be at least 1", field="threads")
        return threads
    return settings.threads if settings else 1


def resolve_out_dir(settings: Settings | None, out_dir: str | None) -> Path:
    if out_dir is not None:
        return Path(out_dir).expanduser()
    return settings.get_out_dir() if settings else Path("results")


def fail(error: Exception, output_format: OutputFormat, command: str) -> NoReturn:
    """Print an error panel (or JSON) and exit with the matching code.

    Configuration and input errors exit with 2, numerical errors with 3,
    anything else with 1.
    """
    if isinstance(error, ConfigurationError):
        code = EXIT_CONFIG_ERROR
        title = "Invalid Experiment Spec"
        field = getattr(error, "field", None)
        suggestion = f"Check the '{field}' entry of the spec" if field else "Check the spec file and the command-line flags"
    elif isinstance(error, ReportSchemaError):
        code = EXIT_CONFIG_ERROR
        title = "Result Table Mismatch"
        suggestion = "Pass CSV files written by 'pnbound run' or 'pnbound preset'"
    elif isinstance(error, FileNotFoundError):
        code = EXIT_CONFIG_ERROR
        title = "File Not Found"
        suggestion = "Check the path"
    elif isinstance(error, NumericalError):
        code = EXIT_NUMERICAL_ERROR
        title = f"Numerical Failure in {error.module}"
        suggestion = "Use rho = 1 for fully synchronized transmitters, or increase the Monte-Carlo budget"
    else:
        code = 1
        title = "Unexpected Error"
        suggestion = "Re-run with --debug for a full traceback"
        logger.exception("Unexpected error", command=command)

    if output_format == OutputFormat.JSON:
        print_json({
            "command": command,
            "success": False,
            "error": str(error),
            "exit_code": code,
        })
    else:
        console.print(create_error_panel(title, str(error), suggestion))
    raise typer.Exit(code)


def _print_run_result(result: RunExperimentResult, output_format: OutputFormat) -> None:
    if output_format == OutputFormat.JSON:
        print_json({
            "command": "run",
            "success": True,
            "name": result.name,
            "files": [str(path) for path in result.csv_files],
            "manifest": str(result.manifest_file),
            "rows": result.rows,
            "wall_time_s": result.wall_time_s,
        })
        return

    if output_format == OutputFormat.TEXT:
        for path in result.csv_files:
            console.print(str(path))
        console.print(str(result.manifest_file))
        return

    table = Table(title=f"Experiment {result.name}")
    table.add_column("File", style="bold blue")
    table.add_column("Kind", style="cyan")
    for path in result.csv_files:
        table.add_row(str(path), "table")
    table.add_row(str(result.manifest_file), "manifest")
    console.print(table)
    console.print(create_success_panel(
        "Experiment Complete",
        f"{result.rows} rows in {len(result.csv_files)} table(s), {result.wall_time_s:.1f} s"
    ))


async def execute_spec(
    spec: ExperimentSpec,
    out_dir: Path,
    threads: int,
    output_format: OutputFormat,
) -> RunExperimentResult:
    """Run a validated spec and print the outcome."""
    use_case = RunExperimentUseCase(CsvResultRepository(out_dir), version=__version__)
    result = await use_case.execute(RunExperimentCommand(spec=spec, threads=threads))
    if not result.success:
        if output_format == OutputFormat.JSON:
            print_json({"command": "run", "success": False, "error": result.error})
        else:
            console.print(create_error_panel("Experiment Failed", result.error or "unknown error",
                                             "Check that the output directory is writable"))
        raise typer.Exit(1)

    _print_run_result(result, output_format)
    return result


async def run_command(
    spec_file: str,
    seed: int | None = None,
    out_dir: str | None = None,
    threads: int | None = None,
    estimator: str | None = None,
    settings: Settings | None = None,
    output_format: OutputFormat = OutputFormat.TABLE,
) -> None:
    """Run an experiment spec file."""
    try:
        overrides = build_overrides(settings, seed=seed, estimator=parse_estimator_flag(estimator))
        spec = await YamlSpecRepository(overrides=overrides).load_spec(Path(spec_file))
        await execute_spec(spec, resolve_out_dir(settings, out_dir), resolve_threads(settings, threads), output_format)
    except typer.Exit:
        raise
    except Exception as e:
        fail(e, output_format, "run")


async def preset_command(
    name: str | None = None,
    seed: int | None = None,
    out_dir: str | None = None,
    threads: int | None = None,
    estimator: str | None = None,
    settings: Settings | None = None,
    output_format: OutputFormat = OutputFormat.TABLE,
) -> None:
    """Run a figure-reproduction preset, or list the presets when no name is given."""
    if name is None:
        _print_presets(output_format)
        return

    try:
        overrides = build_overrides(settings, seed=seed, estimator=parse_estimator_flag(estimator))
        spec = get_preset(name).with_overrides(**overrides)
        await execute_spec(spec, resolve_out_dir(settings, out_dir), resolve_threads(settings, threads), output_format)
    except typer.Exit:
        raise
    except Exception as e:
        fail(e, output_format, "preset")


def _print_presets(output_format: OutputFormat) -> None:
    if output_format == OutputFormat.JSON:
        print_json({name: PRESETS[name] for name in preset_names()})
        return

    table = Table(title="Presets")
    table.add_column("Name", style="bold blue")
    table.add_column("Mode", style="cyan")
    table.add_column("Constellation")
    table.add_column("N")
    table.add_column("Sweep", style="yellow")
    for name in preset_names():
        spec = get_preset(name)
        table.add_row(
            name,
            ", ".join(mode.value for mode in spec.mode),
            ", ".join(spec.constellation),
            ", ".join(str(n) for n in spec.n),
            spec.sweep_variable.value,
        )
    console.print(table)


async def report_command(
    csv_files: list[str],
    name: str = "report",
    out_dir: str | None = None,
    settings: Settings | None = None,
    output_format: OutputFormat = OutputFormat.TABLE,
) -> None:
    """Build a gnuplot script and a text summary from result tables."""
    try:
        paths = [Path(path).expanduser() for path in csv_files]
        target = Path(out_dir).expanduser() if out_dir else (paths[0].parent if paths else Path("."))
        use_case = ReportResultsUseCase(CsvResultRepository(target), build_gnuplot_script)
        result = await use_case.execute(ReportCommand(csv_paths=paths, name=name))
    except Exception as e:
        fail(e, output_format, "report")

    _print_report_result(result, output_format)


def _print_report_result(result: ReportResult, output_format: OutputFormat) -> None:
    if not result.success:
        console.print(create_error_panel("Report Failed", result.error or "unknown error",
                                         "Pass at least one CSV file"))
        raise typer.Exit(EXIT_CONFIG_ERROR)

    if output_format == OutputFormat.JSON:
        print_json({
            "command": "report",
            "success": True,
            "script": str(result.script_file),
            "summary_file": str(result.summary_file),
            "summary": result.summary_lines,
        })
        return

    for line in result.summary_lines:
        console.print(line)
    if output_format == OutputFormat.TABLE:
        console.print(create_info_panel(
            "Report Written",
            f"Plot script: {result.script_file}\nSummary: {result.summary_file}\n\n"
            f"Render with: gnuplot {result.script_file.name if result.script_file else ''}"
        ))


async def harness_command(
    spec_file: str | None = None,
    preset: str | None = None,
    trials: int | None = None,
    seed: int | None = None,
    threads: int | None = None,
    settings: Settings | None = None,
    output_format: OutputFormat = OutputFormat.TABLE,
) -> None:
    """Compare the empirical MAP estimator MSE with the bound."""
    try:
        if (spec_file is None) == (preset is None):
            raise InvalidConfigurationError("Give exactly one of a spec file or --preset", field="spec")
        overrides = build_overrides(settings, seed=seed, estimator_trials=trials)
        if preset is not None:
            spec = get_preset(preset).with_overrides(**overrides)
        else:
            spec = await YamlSpecRepository(overrides=overrides).load_spec(Path(spec_file))

        rows = await asyncio.to_thread(mse_harness, spec, None, None, resolve_threads(settings, threads))
    except Exception as e:
        fail(e, output_format, "harness")

    _print_harness_rows(rows, output_format)


def _print_harness_rows(rows: list[HarnessRow], output_format: OutputFormat) -> None:
    if output_format == OutputFormat.JSON:
        print_json([
            {
                "mode": row.mode,
                "constellation": row.constellation,
                "n": row.n,
                "snr_db": row.snr_db,
                "rho": row.rho,
                "sigma2_zeta": row.sigma2_zeta,
                "symbol_index": row.symbol_index,
                "trials": row.trials,
                "empirical_mse": row.empirical_mse,
                "mse_stderr": row.mse_stderr,
                "bound": row.bound,
                "gap_db": row.gap_db,
                "respects_bound": row.respects_bound,
                "converged_fraction": row.converged_fraction,
            }
            for row in rows
        ])
        return

    if not rows:
        console.print(create_info_panel("Nothing to Estimate", "The spec has no DA or NDA mode"))
        return

    table = Table(title="MAP estimator vs bound")
    table.add_column("Mode", style="bold blue")
    table.add_column("Constellation")
    table.add_column("SNR (dB)", justify="right")
    table.add_column("rho", justify="right")
    table.add_column("sigma2_zeta", justify="right")
    table.add_column("Symbol", justify="right")
    table.add_column("MSE", justify="right")
    table.add_column("Bound", justify="right")
    table.add_column("Gap", justify="right")
    table.add_column("Converged", justify="right")
    for row in rows:
        table.add_row(
            row.mode,
            row.constellation,
            f"{row.snr_db:g}",
            f"{row.rho:g}",
            f"{row.sigma2_zeta:g}",
            str(row.symbol_index),
            f"{format_rad2(row.empirical_mse)} ± {row.mse_stderr:.1e}",
            format_rad2(row.bound),
            format_gap_db(row.gap_db),
            f"{100.0 * row.converged_fraction:.1f}%",
        )
    console.print(table)

    violations = sum(1 for row in rows if not row.respects_bound)
    if violations:
        console.print(f"[yellow]⚠️  {violations} row(s) fall below the bound by more than 3 standard errors[/yellow]")


async def amplitude_command(
    sigma2_eps_tilde: str = "1e-4,1e-3,1e-2",
    snr_db: str = "0:40:10",
    samples: int = 200_000,
    seed: int | None = None,
    settings: Settings | None = None,
    output_format: OutputFormat = OutputFormat.TABLE,
) -> None:
    """Relative error of the amplitude approximations on an SNR grid."""
    try:
        eps_grid = grid_option("sigma2_eps_tilde", sigma2_eps_tilde)
        snr_grid = grid_option("snr_db", snr_db)
        if any(value < 0 for value in eps_grid):
            raise InvalidConfigurationError("Invalid value for 'sigma2_eps_tilde': must be >= 0", field="sigma2_eps_tilde")
        if samples < 1000:
            raise InvalidConfigurationError("Invalid value for 'samples': must be at least 1000", field="samples")
        master_seed = seed if seed is not None else (settings.seed if settings and settings.seed is not None else 0)

        rows = await asyncio.to_thread(validate_approximations, eps_grid, snr_grid, 1.0, samples, master_seed)
    except Exception as e:
        fail(e, output_format, "amplitude")

    _print_amplitude_rows(rows, output_format)


def _print_amplitude_rows(rows: list[ApproximationError], output_format: OutputFormat) -> None:
    if output_format == OutputFormat.JSON:
        print_json([
            {
                "snr_db": row.snr_db,
                "sigma2_eps_tilde": row.sigma2_eps_tilde,
                "high_snr": row.high_snr,
                "small_error": row.small_error,
                "combined": row.combined,
                "exact_mean": row.exact_mean,
                "samples": row.samples,
            }
            for row in rows
        ])
        return

    table = Table(title="Amplitude approximation error (relative mean error)")
    table.add_column("SNR (dB)", justify="right", style="bold blue")
    table.add_column("sigma2_eps_tilde", justify="right")
    table.add_column("high SNR", justify="right")
    table.add_column("small error", justify="right")
    table.add_column("combined", justify="right", style="cyan")
    table.add_column("exact mean", justify="right")
    for row in rows:
        table.add_row(
            f"{row.snr_db:g}",
            f"{row.sigma2_eps_tilde:g}",
            f"{row.high_snr:.2e}",
            f"{row.small_error:.2e}",
            f"{row.combined:.2e}",
            f"{row.exact_mean:.6f}",
        )
    console.print(table)


# Sync wrappers for Typer
def run_sync(
    ctx: typer.Context,
    spec_file: str = typer.Argument(..., help="Experiment spec file (YAML)"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed overriding the spec"),
    out_dir: str | None = typer.Option(None, "--out-dir", help="Directory for CSV tables and the manifest"),
    threads: int | None = typer.Option(None, "--threads", "-j", help="Worker threads"),
    estimator: str | None = typer.Option(None, "--estimator", help="Fill the empirical MSE column (on|off)", metavar="on|off"),
) -> None:
    """Evaluate the bounds described by a spec file.

    Examples:
        pnbound run experiments/fig4.yaml
        pnbound run my_spec.yaml --seed 7 --threads 8
        pnbound run my_spec.yaml --estimator on --out-dir results/da
    """
    output_format = ctx.obj.get('output_format', OutputFormat.TABLE)
    asyncio.run(run_command(spec_file, seed, out_dir, threads, estimator, ctx.obj.get('settings'), output_format))


def preset_sync(
    ctx: typer.Context,
    name: str | None = typer.Argument(None, help="Preset name (fig2, fig3, fig4, fig5); lists presets when omitted"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed overriding the preset"),
    out_dir: str | None = typer.Option(None, "--out-dir", help="Directory for CSV tables and the manifest"),
    threads: int | None = typer.Option(None, "--threads", "-j", help="Worker threads"),
    estimator: str | None = typer.Option(None, "--estimator", help="Fill the empirical MSE column (on|off)", metavar="on|off"),
) -> None:
    """Reproduce one of the shipped figure presets.

    Examples:
        pnbound preset                 # List presets
        pnbound preset fig4            # Rho sweep at 15 dB
        pnbound preset fig3 --seed 3   # SNR sweep with another seed
    """
    output_format = ctx.obj.get('output_format', OutputFormat.TABLE)
    asyncio.run(preset_command(name, seed, out_dir, threads, estimator, ctx.obj.get('settings'), output_format))


def report_sync(
    ctx: typer.Context,
    csv_files: list[str] = typer.Argument(..., help="Result tables written by run or preset"),
    name: str = typer.Option("report", "--name", "-n", help="Base name of the script and summary files"),
    out_dir: str | None = typer.Option(None, "--out-dir", help="Directory for the report (default: next to the first table)"),
) -> None:
    """Write a gnuplot script and a text summary for result tables.

    Examples:
        pnbound report results/fig4_*.csv
        pnbound report results/fig3_QPSK_n100.csv --name fig3
    """
    output_format = ctx.obj.get('output_format', OutputFormat.TABLE)
    asyncio.run(report_command(csv_files, name, out_dir, ctx.obj.get('settings'), output_format))


def harness_sync(
    ctx: typer.Context,
    spec_file: str | None = typer.Argument(None, help="Experiment spec file (YAML)"),
    preset: str | None = typer.Option(None, "--preset", "-p", help="Use a preset instead of a spec file"),
    trials: int | None = typer.Option(None, "--trials", "-t", help="Monte-Carlo blocks per configuration"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed overriding the spec"),
    threads: int | None = typer.Option(None, "--threads", "-j", help="Worker threads"),
) -> None:
    """Run the MAP estimator and compare its MSE with the bound.

    Examples:
        pnbound harness my_spec.yaml --trials 2000
        pnbound --output json harness --preset fig3 --trials 200
    """
    output_format = ctx.obj.get('output_format', OutputFormat.TABLE)
    asyncio.run(harness_command(spec_file, preset, trials, seed, threads, ctx.obj.get('settings'), output_format))


def amplitude_sync(
    ctx: typer.Context,
    sigma2_eps_tilde: str = typer.Option("1e-4,1e-3,1e-2", "--eps", help="sigma2_eps_tilde grid (list or start:stop:step)"),
    snr_db: str = typer.Option("0:40:10", "--snr", help="SNR grid in dB (list or start:stop:step)"),
    samples: int = typer.Option(200_000, "--samples", help="Monte-Carlo samples per grid point"),
    seed: int | None = typer.Option(None, "--seed", help="Master seed"),
) -> None:
    """Tabulate where the high-SNR and small-error amplitude approximations hold.

    Examples:
        pnbound amplitude
        pnbound amplitude --snr 0,10,20,30 --eps 1e-3
    """
    output_format = ctx.obj.get('output_format', OutputFormat.TABLE)
    asyncio.run(amplitude_command(sigma2_eps_tilde, snr_db, samples, seed, ctx.obj.get('settings'), output_format))
