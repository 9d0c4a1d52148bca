"""CSV result tables and JSON run manifests on the local filesystem."""

import csv
import json
import math
from pathlib import Path

import structlog

from ...application.dto.result_dto import CSV_COLUMNS, REQUIRED_COLUMNS, RunManifest, SweepRow
from ...domain.repositories.result_repository import ReportSchemaError, ResultRepository

logger = structlog.get_logger()

# Bound columns keep 16 significant digits
_BOUND_FORMAT = "{:.15e}"
_VALUE_FORMAT = "{:.15g}"

_BOUND_COLUMNS = ("bound_rad2", "bound_stderr_rad2", "sigma2_eps_tilde_rad2", "empirical_mse_rad2")
_INT_COLUMNS = ("n", "symbol_index", "seed")
_TEXT_COLUMNS = ("sweep_var_name", "mode", "constellation")


def _format_cell(column: str, value: object) -> str:
    if value is None:
        return ""
    if column in _TEXT_COLUMNS or column in _INT_COLUMNS:
        return str(value)
    if column in _BOUND_COLUMNS:
        return _BOUND_FORMAT.format(float(value))
    return _VALUE_FORMAT.format(float(value))


def _parse_float(text: str | None) -> float | None:
    if text is None or text.strip() == "":
        return None
    return float(text)


class CsvResultRepository(ResultRepository):
    """Writes one UTF-8 CSV per result table into an output directory."""

    def __init__(self, out_dir: Path | str):
        self.out_dir = Path(out_dir)

    def _target(self, filename: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / filename

    async def save_rows(self, name: str, rows: list[SweepRow]) -> Path:
        """Write rows with a header in CSV_COLUMNS order."""
        path = self._target(f"{name}.csv")
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow([_format_cell(column, getattr(row, column)) for column in CSV_COLUMNS])

        logger.info("Wrote result table", path=str(path), rows=len(rows))
        return path

    async def save_manifest(self, manifest: RunManifest) -> Path:
        """Write ``<name>_manifest.json``."""
        path = self._target(f"{manifest.name}_manifest.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump(manifest.to_dict(), f, indent=2)
            f.write("\n")

        logger.info("Wrote run manifest", path=str(path))
        return path

    async def save_text(self, name: str, content: str) -> Path:
        path = self._target(name)
        path.write_text(content, encoding="utf-8")
        logger.debug("Wrote text artifact", path=str(path))
        return path

    async def load_rows(self, path: Path) -> list[SweepRow]:
        """Read a table written by :meth:`save_rows`.

        The trailing ``snr_db``, ``rho`` and ``sigma2_zeta`` columns are optional.

        Raises:
            FileNotFoundError: If the table does not exist
            ReportSchemaError: If a required column is missing
        """
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Result table not found: {path}")

        with open(path, encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames or []
            for column in REQUIRED_COLUMNS:
                if column not in header:
                    raise ReportSchemaError(column, path)

            rows = []
            for record in reader:
                rows.append(SweepRow(
                    sweep_var_name=record["sweep_var_name"],
                    sweep_value=float(record["sweep_value"]),
                    mode=record["mode"],
                    constellation=record["constellation"],
                    n=int(record["n"]),
                    symbol_index=int(record["symbol_index"]),
                    bound_rad2=float(record["bound_rad2"]),
                    bound_stderr_rad2=_parse_float(record["bound_stderr_rad2"]) or 0.0,
                    sigma2_eps_tilde_rad2=float(record["sigma2_eps_tilde_rad2"]),
                    empirical_mse_rad2=_parse_float(record["empirical_mse_rad2"]),
                    seed=int(record["seed"]),
                    snr_db=_parse_float(record.get("snr_db")),
                    rho=_parse_float(record.get("rho")),
                    sigma2_zeta=_parse_float(record.get("sigma2_zeta")),
                ))

        if any(not math.isfinite(row.bound_rad2) for row in rows):
            logger.warning("Result table contains non-finite bounds", path=str(path))

        logger.debug("Read result table", path=str(path), rows=len(rows))
        return rows
