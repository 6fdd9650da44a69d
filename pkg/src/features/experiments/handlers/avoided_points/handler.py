"""
avoided-points handler.

Avoided-point measures of independent walks observed at t_N, their total masses against the exact
mean (1/hatK_N) sum_x exp(-t_N / G(x, x)) and its large-N value.
"""

from __future__ import annotations

import math

import numpy as np

from features.experiments.context import RunContext
from features.experiments.handlers.run_walk.handler import walk_time
from features.measures.models.point_measure import PointKind
from features.stats.models.verdict import Verdict
from features.walk.models.profile import LocalTimeProfile


def avoided_points(ctx: RunContext) -> list[Verdict]:
    config = ctx.config
    domain = ctx.domain
    green = ctx.green()
    params = ctx.params
    t = walk_time(ctx)
    visits, L, counts = ctx.walks.sample_profiles(
        domain, t, config.replicas, ctx.streams, "avoided", config.mode, ctx.threads
    )

    masses = np.empty(config.replicas)
    for index in range(config.replicas):
        profile = LocalTimeProfile(
            domain=domain, t=t, L=L[index], visits=visits[index], n_excursions=int(counts[index])
        )
        measure = ctx.measures.build_point_measure(profile, params, PointKind.AVOIDED)
        masses[index] = measure.total_mass()
        header, rows = measure.rows()
        ctx.writer.csv(index, header, rows)
    ctx.writer.csv("masses", ["replica", "mass"], [(i, float(m)) for i, m in enumerate(masses)])

    exact = ctx.measures.avoided_first_moment(green, params)
    ctx.report("exact_mean_mass", exact)
    ctx.report("mc_mean_mass", float(masses.mean()))
    if params.theta is not None:
        ctx.report(
            "limit_mean_mass", ctx.measures.avoided_first_moment_limit(green, params, config.domain)
        )
    if config.replicas < 2:
        return []
    # P(L_t(x) = 0) is exact, so a zero-variance sample only happens when the mean is ~0
    sigma = max(
        ctx.stats.standard_error(masses), 1 / (params.hatK_N * math.sqrt(config.replicas))
    )
    return ctx.holding_verdicts(
        [ctx.stats.within("avoided-first-moment", "mean_mass", float(masses.mean()), exact, sigma, k=3.0)]
    )
