"""
cover-time handler.

rho-local time at coverage over independent walks, against the leading order
sqrt(t_cov) ~ sqrt(2 g) log N.
"""

from __future__ import annotations

import math

import numpy as np

from features.experiments.context import RunContext
from features.potential.constants import g
from features.stats.models.verdict import Verdict

COVER_BAND = (0.7, 1.2)
COVER_BAND_MIN_N = 32


def cover_time(ctx: RunContext) -> list[Verdict]:
    config = ctx.config
    covers = ctx.walks.cover_times(ctx.domain, config.replicas, ctx.streams, threads=ctx.threads)
    ctx.writer.csv(
        "covers",
        ["replica", "t_cover", "natural_steps", "n_excursions"],
        [(i, c.t_cover, c.natural_steps, c.n_excursions) for i, c in enumerate(covers)],
    )
    roots = np.sqrt([c.t_cover for c in covers])
    scale = math.sqrt(2 * g) * math.log(config.N)
    ratio = float(np.median(roots)) / scale if scale > 0 else math.nan
    ctx.report("median_sqrt_ratio", ratio)
    ctx.report("mean_t_cover", float(np.mean([c.t_cover for c in covers])))
    if config.N < COVER_BAND_MIN_N:
        return []
    return [ctx.stats.in_band("cover-time-order", "median_sqrt_ratio", ratio, *COVER_BAND)]
