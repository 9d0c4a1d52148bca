"""Gnuplot script generation for result tables."""

from pathlib import Path

import structlog

from ...application.dto.result_dto import CSV_COLUMNS, SweepRow

logger = structlog.get_logger()

_AXIS_LABELS = {
    "snr_db": "SNR (dB)",
    "rho": "synchronization factor rho",
    "sigma2_zeta": "sigma^2_zeta (rad^2)",
    "symbol_index": "symbol index n",
}

# gnuplot columns are 1-based
_COLUMN = {name: index + 1 for index, name in enumerate(CSV_COLUMNS)}


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _series(path: Path, mode: str, value_column: str, title: str, style: str) -> str:
    sweep = _COLUMN["sweep_value"]
    mode_column = _COLUMN["mode"]
    value = _COLUMN[value_column]
    return (
        f"{_quote(str(path))} every ::1 using {sweep}:(strcol({mode_column}) eq {_quote(mode)} ? ${value} : 1/0) "
        f"with {style} title {_quote(title)}"
    )


def _table_plots(path: Path, rows: list[SweepRow]) -> list[str]:
    if not rows:
        return [f"# {path}: no rows"]

    first = rows[0]
    sweep = first.sweep_var_name
    modes = list(dict.fromkeys(row.mode for row in rows))
    label = f"{first.constellation} N={first.n}"
    stem = path.stem

    lines = [
        "",
        f"# {path.name}",
        f"set output {_quote(stem + '.png')}",
        f"set title {_quote(label)}",
        f"set xlabel {_quote(_AXIS_LABELS.get(sweep, sweep))}",
        "set ylabel \"MSE (rad^2)\"",
        "set logscale x" if sweep == "sigma2_zeta" else "unset logscale x",
    ]

    series = [_series(path, mode, "bound_rad2", f"{mode} bound", "linespoints") for mode in modes]
    for mode in modes:
        if any(row.mode == mode and row.has_empirical for row in rows):
            series.append(_series(path, mode, "empirical_mse_rad2", f"{mode} MAP estimate", "points"))
    lines.append("plot " + ", \\\n     ".join(series))

    if any(row.sigma2_eps_tilde_rad2 > 0 for row in rows):
        lines += [
            f"set output {_quote(stem + '_eps_tilde.png')}",
            "set ylabel \"sigma^2_eps_tilde (rad^2)\"",
            "plot " + ", \\\n     ".join(
                _series(path, mode, "sigma2_eps_tilde_rad2", f"{mode} sigma^2_eps_tilde", "linespoints")
                for mode in modes
            ),
        ]
    return lines


def build_gnuplot_script(tables: list[tuple[Path, list[SweepRow]]]) -> str:
    """Gnuplot script with one PNG per table (plus a residual amplitude-noise plot
    when the table has nonzero sigma2_eps_tilde).

    Series of the empirical MSE column are added only for modes that have it.
    """
    lines = [
        "# Generated by pnbound",
        "set datafile separator \",\"",
        "set terminal pngcairo size 900,600",
        "set logscale y",
        "set format y \"10^{%L}\"",
        "set grid",
        "set key top right",
    ]
    for path, rows in tables:
        lines += _table_plots(Path(path), rows)

    logger.debug("Built gnuplot script", tables=len(tables))
    return "\n".join(lines) + "\n"
