"""
thick-points handler.

Thick-point measures of independent DGFF draws, their total masses against the exact Gaussian-tail
first moment, and the exact/limit first-moment pair with the b-shift ratio.
"""

from __future__ import annotations

import math

import numpy as np

from features.dgff.models.field import FieldSample
from features.experiments.context import RunContext
from features.measures.models.point_measure import PointKind
from features.stats.models.verdict import Verdict


def thick_points(ctx: RunContext) -> list[Verdict]:
    config = ctx.config
    domain = ctx.domain
    green = ctx.green()
    params = ctx.params
    b = config.b if config.b is not None else 0.0

    fields = ctx.dgff.sample_fields(
        green, config.replicas, ctx.streams, purpose="thick", threads=ctx.threads
    )
    masses = np.empty(config.replicas)
    for index, values in enumerate(fields):
        sample = FieldSample(domain=domain, values=values, seed_tag=ctx.streams.tag("thick", index))
        measure = ctx.measures.build_point_measure(sample, params, PointKind.THICK).restrict(b)
        masses[index] = len(measure) * measure.weight
        if index < config.emit:
            header, rows = measure.rows()
            ctx.writer.csv(index, header, rows)
    ctx.writer.csv("masses", ["replica", "mass"], [(i, float(m)) for i, m in enumerate(masses)])

    verdicts = []
    if params.lam is not None:
        exact, limit = ctx.measures.thick_first_moment(green, params, config.domain, b=b)
        shifted, _ = ctx.measures.thick_first_moment(green, params, config.domain, b=b + 1.0)
        ctx.report("exact_first_moment", exact)
        ctx.report("limit_first_moment", limit)
        ctx.report("shift_ratio", shifted / exact if exact > 0 else math.nan)
        ctx.report("shift_ratio_limit", math.exp(-params.alpha * params.lam))
        if config.replicas >= 2:
            verdicts.append(
                ctx.stats.within(
                    "thick-first-moment",
                    "mean_mass",
                    float(masses.mean()),
                    exact,
                    max(ctx.stats.standard_error(masses), 1 / (params.K_N * math.sqrt(config.replicas))),
                )
            )
    ctx.report("mean_mass", float(masses.mean()))
    return verdicts
