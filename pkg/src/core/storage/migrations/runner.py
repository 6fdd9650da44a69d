"""
Migration runner for the run catalog.

Discovers `NNNN_name.py` modules under src/migrations, applies the pending ones in order and
records them in `_migrations`.
"""

import importlib.util
from datetime import datetime
from pathlib import Path
from types import ModuleType

import duckdb
from loguru import logger

log = logger.bind(service="migrations")


def get_migrations_dir() -> Path:
    # src/core/storage/migrations -> src/migrations
    return Path(__file__).parent.parent.parent.parent / "migrations"


def ensure_migrations_table(conn: duckdb.DuckDBPyConnection) -> None:
    conn.execute("""
        CREATE TABLE IF NOT EXISTS _migrations (
            name VARCHAR PRIMARY KEY,
            applied_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
        )
    """)


def get_applied_migrations(conn: duckdb.DuckDBPyConnection) -> set[str]:
    result = conn.execute("SELECT name FROM _migrations").fetchall()
    return {row[0] for row in result}


def discover_migrations() -> list[tuple[str, Path]]:
    """Sorted (migration_name, file_path) pairs."""
    migrations_dir = get_migrations_dir()
    if not migrations_dir.exists():
        return []
    return sorted(
        (path.stem, path) for path in migrations_dir.glob("[0-9][0-9][0-9][0-9]_*.py")
    )


def load_migration(filepath: Path) -> ModuleType:
    """Load a migration module; it must expose up(conn)."""
    spec = importlib.util.spec_from_file_location(filepath.stem, filepath)
    if spec is None or spec.loader is None:
        raise ImportError(f"Cannot load migration: {filepath}")

    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)

    if not hasattr(module, "up"):
        raise AttributeError(f"Migration {filepath.stem} is missing up() function")
    return module


def _record(conn: duckdb.DuckDBPyConnection, name: str) -> None:
    conn.execute(
        "INSERT INTO _migrations (name, applied_at) VALUES (?, ?)",
        [name, datetime.now()],
    )


def apply_migrations(conn: duckdb.DuckDBPyConnection) -> int:
    """Apply pending migrations, each inside its own transaction; returns how many ran."""
    ensure_migrations_table(conn)
    applied = get_applied_migrations(conn)
    pending = [(name, path) for name, path in discover_migrations() if name not in applied]

    for name, filepath in pending:
        module = load_migration(filepath)
        conn.begin()
        try:
            module.up(conn)
            _record(conn, name)
            conn.commit()
        except Exception as e:
            conn.rollback()
            log.bind(migration=name).error("migration failed: {}", e)
            raise
        log.bind(migration=name).info("applied {}", name)

    return len(pending)
