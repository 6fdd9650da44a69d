import typer

app = typer.Typer()


@app.command("list")
def list_(
    limit: int = typer.Option(20, "--limit", "-n", help="How many runs to show"),
    command: str = typer.Option(None, "--command", help="Only runs of this command"),
) -> None:
    """List recorded runs, newest first."""
    from features.experiments.router import list_runs

    rows = list_runs(limit=limit, command=command)
    if not rows:
        typer.echo("No runs recorded.")
        return
    for run_id, cmd, n_scale, seed, status, exit_code, wall_time, created_at in rows:
        mark = "✓" if exit_code == 0 else "✗"
        typer.echo(
            f"  {mark} {run_id}  {cmd:<18} N={n_scale}  seed={seed}  {status:<6}  "
            f"{wall_time:8.2f}s  {created_at:%Y-%m-%d %H:%M:%S}"
        )


@app.command()
def show(run_id: str = typer.Argument(..., help="Run id (ULID)")) -> None:
    """Show one run and its verdicts."""
    from features.experiments.router import show_run

    run, verdicts = show_run(run_id)
    if run is None:
        typer.echo(f"✗ No run {run_id}", err=True)
        raise typer.Exit(1)

    typer.echo(f"{run.id}  {run.command}  N={run.n_scale}  seed={run.master_seed}")
    typer.echo(f"  status {run.status} (exit {run.exit_code}), {run.wall_time:.2f}s, {run.output_dir}")
    for check, statistic, value, target, sigma, passed in verdicts:
        mark = "✓" if passed else "✗"
        typer.echo(f"  {mark} {check:<34} {statistic}={value:.6g} target={target:.6g} sigma={sigma:.3g}")


@app.command()
def migrate() -> None:
    """Apply pending catalog migrations."""
    from core.storage.database import DB
    from core.storage.migrations.runner import apply_migrations

    DB.connect()
    try:
        applied_count = apply_migrations(DB.get_connection())
        if applied_count == 0:
            typer.echo("No pending migrations.")
        else:
            typer.echo(f"✓ Applied {applied_count} migration(s).")
    except Exception as e:
        typer.echo(f"✗ Migration failed: {e}", err=True)
        raise typer.Exit(3)
    finally:
        DB.disconnect()


@app.command()
def status() -> None:
    """Show catalog migration status."""
    from core.storage.database import DB
    from core.storage.migrations.runner import (
        discover_migrations,
        ensure_migrations_table,
        get_applied_migrations,
    )

    DB.connect()
    try:
        conn = DB.get_connection()
        ensure_migrations_table(conn)
        applied = get_applied_migrations(conn)
        all_migrations = discover_migrations()

        for name, _ in all_migrations:
            marker = "✓ applied" if name in applied else "○ pending"
            typer.echo(f"  {marker}  {name}")

        pending_count = len([m for m in all_migrations if m[0] not in applied])
        typer.echo(f"\n{len(applied)} applied, {pending_count} pending")
    finally:
        DB.disconnect()
