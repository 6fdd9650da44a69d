"""
Run catalog connection.

One shared duckdb connection per process; `catalog()` opens it, brings the schema up to date and
binds duckling before handing it out.
"""

from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import duckdb
from duckling import init_duckling_sync
from loguru import logger

from config.settings import settings
from core.errors import IoError


class DB:
    _instance: Optional[duckdb.DuckDBPyConnection] = None

    @classmethod
    def connect(cls, path: Optional[str] = None):
        if cls._instance is None:
            target = path or settings.database_path
            if target != ":memory:":
                Path(target).parent.mkdir(parents=True, exist_ok=True)
            try:
                cls._instance = duckdb.connect(target)
            except duckdb.Error as e:
                raise IoError(f"cannot open run catalog {target}: {e}") from e

    @classmethod
    def disconnect(cls):
        if cls._instance:
            cls._instance.close()
            cls._instance = None

    @classmethod
    def get_connection(cls) -> duckdb.DuckDBPyConnection:
        if cls._instance is None:
            raise RuntimeError("Database is not connected. Call connect() first.")
        return cls._instance


def db() -> duckdb.DuckDBPyConnection:
    """
    Returns the shared database connection.
    """
    return DB.get_connection()


@contextmanager
def catalog() -> Iterator[duckdb.DuckDBPyConnection]:
    """Connected, migrated and duckling-bound catalog for the duration of the block."""
    from core.storage.migrations.runner import apply_migrations

    owner = DB._instance is None
    DB.connect()
    try:
        conn = DB.get_connection()
        applied = apply_migrations(conn)
        if applied:
            logger.bind(applied=applied).debug("catalog schema migrated")
        init_duckling_sync(connection=conn)
        yield conn
    finally:
        if owner:
            DB.disconnect()
