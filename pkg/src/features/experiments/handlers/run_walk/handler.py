"""
run-walk handler.

Local-time profiles L_t in the rho-parametrization, with the mean-local-time and Poisson
excursion-count checks.
"""

from __future__ import annotations

import math

import numpy as np

from features.experiments.context import RunContext
from features.stats.models.verdict import Verdict
from features.walk.models.profile import LocalTimeProfile


def walk_time(ctx: RunContext) -> float:
    """Explicit t wins over t_N = 2 g theta (log N)^2."""
    if ctx.config.t is not None:
        return ctx.config.t
    return ctx.params.t_N


def run_walk(ctx: RunContext) -> list[Verdict]:
    config = ctx.config
    domain = ctx.domain
    t = walk_time(ctx)
    visits, L, counts = ctx.walks.sample_profiles(
        domain, t, config.replicas, ctx.streams, "walk", config.mode, ctx.threads
    )

    for index in range(min(config.emit, config.replicas)):
        profile = LocalTimeProfile(
            domain=domain,
            t=t,
            L=L[index],
            visits=visits[index],
            n_excursions=int(counts[index]),
            mode=config.mode,
            seed_tag=ctx.streams.tag("walk", index),
        )
        header, rows = profile.rows()
        ctx.writer.csv(index, header, rows)
        ctx.writer.pgm(index, domain.grid_values(profile.L))

    ctx.writer.csv(
        "excursions", ["replica", "n_excursions"], [(i, int(c)) for i, c in enumerate(counts)]
    )
    ctx.report("t", t)
    ctx.report("mean_local_time", float(L.mean()))
    if config.replicas < 2 or t == 0:
        return []

    site_means = L.mean(axis=1)
    expected_count = domain.pi_rho * t
    verdicts = [
        ctx.stats.within(
            "walk-mean-local-time",
            "mean_L",
            float(site_means.mean()),
            t,
            ctx.stats.standard_error(site_means),
        ),
        ctx.stats.within(
            "walk-excursion-count",
            "mean_N_t",
            float(counts.mean()),
            expected_count,
            math.sqrt(expected_count / config.replicas),
        ),
        ctx.stats.within(
            "walk-excursion-dispersion",
            "var_over_mean",
            float(counts.var(ddof=1) / max(counts.mean(), 1e-300)),
            1.0,
            math.sqrt(2.0 / (config.replicas - 1)),
        ),
    ]
    return ctx.holding_verdicts(verdicts)
