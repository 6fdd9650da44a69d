import sys
from pathlib import Path
from typing import Optional

import typer
from loguru import logger

from cli.catalog import app as catalog_app
from config.settings import settings

app = typer.Typer(help="GFF lab: random-walk local time and the DGFF on wired lattice domains")

app.add_typer(catalog_app, name="catalog", help="Run catalog commands")


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level"),
) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else settings.log_level)


@app.command(
    context_settings={"allow_extra_args": True, "ignore_unknown_options": True},
)
def run(
    ctx: typer.Context,
    command: str = typer.Argument(..., help="green-check, sample-dgff, thick-points, ..."),
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="key=value run config"),
) -> None:
    """Run one experiment; extra --key value pairs override the config file."""
    from core.errors import ConfigError, GffLabError
    from features.experiments.models.config import Command, load_run_config
    from features.experiments.router import run_experiment

    try:
        Command(command)
    except ValueError:
        choices = ", ".join(c.value for c in Command)
        typer.echo(f"✗ command: unknown {command!r}; expected one of {choices}", err=True)
        raise typer.Exit(2)

    try:
        run_config = load_run_config(command, config, ctx.args)
        result = run_experiment(run_config)
    except ConfigError as e:
        typer.echo(f"✗ {e}", err=True)
        raise typer.Exit(e.exit_code)
    except GffLabError as e:
        typer.echo(f"✗ {type(e).__name__}: {e}", err=True)
        raise typer.Exit(e.exit_code)
    except Exception as e:
        logger.exception("unexpected failure")
        typer.echo(f"✗ {type(e).__name__}: {e}", err=True)
        raise typer.Exit(3)

    for verdict in result.verdicts:
        mark = "✓" if verdict.passed else "✗"
        typer.echo(f"  {mark} {verdict.check}: {verdict.statistic}={verdict.value:.6g}")
    passed = sum(v.passed for v in result.verdicts)
    typer.echo(
        f"{'✓' if result.passed else '✗'} {result.command} run {result.run_id}: "
        f"{passed}/{len(result.verdicts)} checks passed, output in {result.output_dir}"
    )
    raise typer.Exit(result.exit_code)


@app.command()
def constants(
    N: int = typer.Option(..., "--N", help="Lattice scale"),
    lam: Optional[float] = typer.Option(None, "--lambda", help="Thick-point level"),
    theta: Optional[float] = typer.Option(None, "--theta", help="Local-time parametrization"),
) -> None:
    """Print g, c0, alpha and the scale constants."""
    from core.errors import GffLabError
    from features.measures.service import MeasuresService

    try:
        params = MeasuresService().scale_params(N, lam=lam, theta=theta)
    except GffLabError as e:
        typer.echo(f"✗ {e}", err=True)
        raise typer.Exit(e.exit_code)
    _, rows = params.rows()
    for name, value in rows:
        typer.echo(f"{name}\t{value!r}")


if __name__ == "__main__":
    app()
