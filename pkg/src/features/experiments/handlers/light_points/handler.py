"""
light-points handler.

Light points {L_{t_N}(x) <= b}: per-replica measures under both normalizations, the histogram
against the limit law mu, and the exact light-point mean with its one-point bound.
"""

from __future__ import annotations

import math

import numpy as np

from features.experiments.context import RunContext
from features.experiments.handlers.run_walk.handler import walk_time
from features.measures.models.point_measure import PointKind
from features.stats.models.verdict import Verdict
from features.walk.models.profile import LocalTimeProfile


def light_points(ctx: RunContext) -> list[Verdict]:
    config = ctx.config
    domain = ctx.domain
    green = ctx.green()
    params = ctx.params
    cap = config.b
    t = walk_time(ctx)
    visits, L, counts = ctx.walks.sample_profiles(
        domain, t, config.replicas, ctx.streams, "light", config.mode, ctx.threads
    )

    masses = (L <= cap).sum(axis=1) / params.hatK_N
    for index in range(min(config.emit, config.replicas)):
        profile = LocalTimeProfile(
            domain=domain, t=t, L=L[index], visits=visits[index], n_excursions=int(counts[index])
        )
        measure = ctx.measures.build_point_measure(profile, params, PointKind.LIGHT, cap=cap)
        header, rows = measure.rows()
        ctx.writer.csv(index, header, rows)
        sqrt_log = ctx.measures.light_measure_sqrt_log(measure, params)
        header, rows = sqrt_log.rows()
        ctx.writer.csv(f"{index}-sqrtlog", header, rows)

    verdicts = []
    if params.theta is not None:
        histogram = ctx.measures.light_point_histogram(L, params, cap)
        header, rows = histogram.rows()
        ctx.writer.csv("histogram", header, rows)
        ctx.report("zero_bin_over_mu_atom", float(histogram.empirical[0] / histogram.mu_target[0]))
        ctx.report("bound_constant", histogram.bound_constant)
        ctx.report("small_value_slope", histogram.small_value_slope)
        ctx.report("small_value_intercept", histogram.small_value_intercept)

    exact, bound = ctx.measures.light_first_moment(green, params, cap)
    ctx.report("exact_mean_mass", exact)
    ctx.report("bound_mean_mass", bound)
    ctx.report("sqrt_log_exact_mean_mass", exact * math.sqrt(math.log(config.N)))
    verdicts.append(ctx.stats.bound("light-point-bound", "exact_over_bound", exact, bound))
    if config.replicas >= 2:
        sigma = max(
            ctx.stats.standard_error(masses), 1 / (params.hatK_N * math.sqrt(config.replicas))
        )
        verdicts += ctx.holding_verdicts(
            [ctx.stats.within("light-first-moment", "mean_mass", float(np.mean(masses)), exact, sigma)]
        )
    return verdicts
