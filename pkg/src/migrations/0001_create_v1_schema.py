"""
Migration: create_v1_schema
"""

import duckdb


def up(conn: duckdb.DuckDBPyConnection) -> None:
    """Catalog tables live in the v1 schema."""
    conn.execute("CREATE SCHEMA IF NOT EXISTS v1")
