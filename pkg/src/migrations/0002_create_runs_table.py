"""
Migration: create_runs_table

One row per `gfflab run` invocation. config holds the echoed RunConfig, master_seed is kept as
text so the full unsigned 64-bit range round-trips.
"""

import duckdb


def up(conn: duckdb.DuckDBPyConnection) -> None:
    conn.execute("""
        CREATE TABLE IF NOT EXISTS v1.runs (
            id          TEXT        PRIMARY KEY,
            command     TEXT        NOT NULL,
            n_scale     INTEGER,
            master_seed TEXT        NOT NULL,
            config      JSON,
            version     TEXT,
            status      TEXT        NOT NULL,
            exit_code   INTEGER     NOT NULL,
            wall_time   DOUBLE      NOT NULL,
            output_dir  TEXT        NOT NULL,
            created_at  TIMESTAMPTZ NOT NULL DEFAULT CURRENT_TIMESTAMP
        )
    """)

    conn.execute("""
        CREATE INDEX IF NOT EXISTS idx_runs_command
        ON v1.runs(command)
    """)
