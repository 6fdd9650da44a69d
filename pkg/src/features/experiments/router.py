"""
Experiment router.

Maps each command onto its handler, runs it against a fresh RunContext, writes the summary,
verdict and manifest files and records the run in the catalog.
"""

from __future__ import annotations

import time
from typing import Callable, Optional

import duckdb
from loguru import logger
from ulid import ULID

from config.settings import settings
from config.utils import get_package_versions
from core.errors import GffLabError
from core.storage.database import catalog, db
from features.experiments.context import RunContext
from features.experiments.handlers.avoided_points.handler import avoided_points
from features.experiments.handlers.cover_time.handler import cover_time
from features.experiments.handlers.green_check.handler import green_check
from features.experiments.handlers.light_points.handler import light_points
from features.experiments.handlers.report_constants.handler import report_constants
from features.experiments.handlers.run_walk.handler import run_walk
from features.experiments.handlers.sample_dgff.handler import sample_dgff
from features.experiments.handlers.thick_points.handler import thick_points
from features.experiments.handlers.verify_isomorphism.handler import verify_isomorphism
from features.experiments.models.catalog import RunRecord, VerdictRecord
from features.experiments.models.config import Command, RunConfig
from features.experiments.models.result import RunResult
from features.experiments.writers import OutputWriter
from features.stats.models.verdict import Verdict

Handler = Callable[[RunContext], list[Verdict]]

HANDLERS: dict[Command, Handler] = {
    Command.GREEN_CHECK: green_check,
    Command.SAMPLE_DGFF: sample_dgff,
    Command.THICK_POINTS: thick_points,
    Command.RUN_WALK: run_walk,
    Command.AVOIDED_POINTS: avoided_points,
    Command.LIGHT_POINTS: light_points,
    Command.VERIFY_ISOMORPHISM: verify_isomorphism,
    Command.COVER_TIME: cover_time,
    Command.REPORT_CONSTANTS: report_constants,
}

log = logger.bind(service="router")


def run_experiment(config: RunConfig, record: bool = True) -> RunResult:
    run_id = str(ULID())
    command = config.command.value
    writer = OutputWriter(config.target_dir, command, config.N, config.master_seed)
    ctx = RunContext(config=config, writer=writer)
    bound = log.bind(run_id=run_id, command=command, N=config.N, seed=config.master_seed)

    bound.info("run started")
    started = time.perf_counter()
    try:
        verdicts = HANDLERS[config.command](ctx)
    except GffLabError as e:
        wall_time = time.perf_counter() - started
        bound.bind(error=type(e).__name__).error("run failed: {}", e)
        if record:
            _record(run_id, config, "error", e.exit_code, wall_time, [])
        raise
    wall_time = time.perf_counter() - started

    if ctx.summary:
        writer.csv("summary", ["name", "value"], ctx.summary)
    if verdicts:
        writer.verdicts(verdicts)
    writer.manifest(
        {
            "run_id": run_id,
            "command": command,
            "config": config.echo(),
            "versions": get_package_versions(),
            "master_seed": str(config.master_seed),
            "threads": ctx.threads,
            "wall_time": round(wall_time, 6),
            "files": [path.name for path in writer.files],
        }
    )

    result = RunResult(
        run_id=run_id,
        command=command,
        output_dir=config.target_dir,
        files=list(writer.files),
        verdicts=verdicts,
        wall_time=wall_time,
    )
    failed = [v.check for v in verdicts if not v.passed]
    bound.bind(checks=len(verdicts), failed=len(failed)).info(
        "run finished in {:.3f}s", wall_time
    )
    if record:
        status = "passed" if result.passed else "failed"
        _record(run_id, config, status, result.exit_code, wall_time, verdicts)
    return result


def _record(
    run_id: str,
    config: RunConfig,
    status: str,
    exit_code: int,
    wall_time: float,
    verdicts: list[Verdict],
) -> None:
    """A catalog that cannot be written never fails the run itself."""
    try:
        with catalog():
            RunRecord(
                id=run_id,
                command=config.command.value,
                n_scale=config.N,
                master_seed=str(config.master_seed),
                config=config.echo(),
                version=settings.version,
                status=status,
                exit_code=exit_code,
                wall_time=wall_time,
                output_dir=str(config.target_dir),
            ).insert_sync()
            for v in verdicts:
                VerdictRecord(
                    run_id=run_id,
                    check_name=v.check,
                    statistic=v.statistic,
                    value=v.value,
                    target=v.target,
                    sigma=v.sigma,
                    passed=v.passed,
                ).insert_sync()
    except (duckdb.Error, GffLabError) as e:
        log.bind(run_id=run_id).warning("run not recorded in catalog: {}", e)


def list_runs(limit: int = 20, command: Optional[str] = None) -> list[tuple]:
    """(id, command, N, seed, status, exit_code, wall_time, created_at), newest first."""
    query = """
        SELECT id, command, n_scale, master_seed, status, exit_code, wall_time, created_at
        FROM v1.runs
    """
    params: list = []
    if command:
        query += " WHERE command = ?"
        params.append(command)
    query += " ORDER BY created_at DESC, id DESC LIMIT ?"
    params.append(limit)
    with catalog():
        return db().execute(query, params).fetchall()


def show_run(run_id: str) -> tuple[Optional[RunRecord], list[tuple]]:
    with catalog():
        run = RunRecord.find_one_sync(RunRecord.id == run_id)
        rows = db().execute(
            """
            SELECT check_name, statistic, value, target, sigma, passed
            FROM v1.verdicts
            WHERE run_id = ?
            ORDER BY check_name
            """,
            [run_id],
        ).fetchall()
    return run, rows
