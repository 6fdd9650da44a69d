"""
report-constants handler.

Echoes g, c0, alpha and the scale constants for the configured N, lambda and theta.
"""

from __future__ import annotations

from features.experiments.context import RunContext
from features.stats.models.verdict import Verdict


def report_constants(ctx: RunContext) -> list[Verdict]:
    header, rows = ctx.params.rows()
    ctx.writer.csv("constants", header, rows)
    for name, value in rows:
        if name != "N":
            ctx.report(name, value)
    return []
