"""Use case for running an experiment spec end to end."""

import asyncio
import time
from dataclasses import dataclass

import structlog

from ...domain.repositories.result_repository import ResultRepository
from ..dto.experiment_spec import ExperimentSpec
from ..dto.result_dto import RunExperimentResult, RunManifest
from .bound_sweep import bound_sweep

logger = structlog.get_logger()


@dataclass
class RunExperimentCommand:
    """Command to run an experiment."""
    spec: ExperimentSpec
    threads: int = 1


class RunExperimentUseCase:
    """Use case for evaluating a spec and writing its tables and manifest."""

    def __init__(self, result_repository: ResultRepository, version: str = "unknown"):
        self._result_repository = result_repository
        self._version = version

    async def execute(self, command: RunExperimentCommand) -> RunExperimentResult:
        """Execute the run experiment use case.

        The sweep runs in a worker thread; tables are written in sweep order
        once it completes.

        Args:
            command: Command with the validated spec and thread count

        Returns:
            RunExperimentResult listing the written files

        Raises:
            NumericalError: If a bound cannot be evaluated
        """
        spec = command.spec
        logger.info("Running experiment", name=spec.name, seed=spec.seed, threads=command.threads)
        started = time.perf_counter()

        loop = asyncio.get_running_loop()
        tables = await loop.run_in_executor(None, bound_sweep, spec, command.threads)

        try:
            csv_files = [await self._result_repository.save_rows(table.label, table.rows) for table in tables]
            wall_time = time.perf_counter() - started

            manifest = RunManifest(
                name=spec.name,
                seed=spec.seed,
                version=self._version,
                wall_time_s=wall_time,
                threads=command.threads,
                spec=spec.to_mapping(),
                files=[path.name for path in csv_files],
            )
            manifest_file = await self._result_repository.save_manifest(manifest)

        except OSError as e:
            logger.error("Failed to write experiment results", name=spec.name, error=str(e))
            return RunExperimentResult.failure_result(spec.name, f"Failed to write results: {e}")

        rows = sum(len(table.rows) for table in tables)
        logger.info("Experiment finished",
                    name=spec.name,
                    files=len(csv_files),
                    rows=rows,
                    wall_time_s=round(wall_time, 3))

        return RunExperimentResult.success_result(
            name=spec.name,
            csv_files=csv_files,
            manifest_file=manifest_file,
            rows=rows,
            wall_time_s=wall_time,
        )
