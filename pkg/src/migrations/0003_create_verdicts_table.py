"""
Migration: create_verdicts_table
"""

import duckdb


def up(conn: duckdb.DuckDBPyConnection) -> None:
    conn.execute("""
        CREATE TABLE IF NOT EXISTS v1.verdicts (
            id         TEXT    PRIMARY KEY,
            run_id     TEXT    NOT NULL,
            check_name TEXT    NOT NULL,
            statistic  TEXT    NOT NULL,
            value      DOUBLE  NOT NULL,
            target     DOUBLE  NOT NULL,
            sigma      DOUBLE  NOT NULL,
            passed     BOOLEAN NOT NULL
        )
    """)

    conn.execute("""
        CREATE INDEX IF NOT EXISTS idx_verdicts_run_id
        ON v1.verdicts(run_id)
    """)
