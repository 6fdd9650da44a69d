"""
verify-isomorphism handler.

Kac moments, the exponential-moment identity, the second Ray-Knight identity in law (plain and
shifted), the CLT and the hitting identities, each checked by Monte Carlo on the configured domain
and on the single-site chain where the laws are explicit.
"""

from __future__ import annotations

import math

import numpy as np

from features.experiments.context import RunContext
from features.lattice.models.wired import WiredDomain
from features.stats.models.verdict import Verdict

KAC_ORDERS = (1, 2, 3)
CLT_TIMES = (4.0, 16.0, 64.0)
RAY_KNIGHT_T = 1.0
EXP_T = 2.0
EXP_RADIUS = 0.5


def _kac(ctx: RunContext, green, f: np.ndarray) -> list[Verdict]:
    values, _ = ctx.walks.local_time_functionals(
        green.domain, None, f, ctx.config.replicas, ctx.streams, "kac", ctx.threads
    )
    verdicts = []
    for n in KAC_ORDERS:
        powers = values[:, 0] ** n
        verdicts.append(
            ctx.stats.within(
                f"kac-moment-{n}",
                "mean_power",
                float(powers.mean()),
                ctx.iso.kac_moment(green, f, n),
                ctx.stats.standard_error(powers),
                k=3.0,
            )
        )
    return verdicts


def _exp_moment(ctx: RunContext, green, f: np.ndarray) -> list[Verdict]:
    radius = ctx.iso.spectral_radius(green, f)
    f = f * (EXP_RADIUS / radius) if radius > EXP_RADIUS else f
    exact = ctx.iso.exp_moment(green, f, EXP_T)
    values, _ = ctx.walks.local_time_functionals(
        green.domain, EXP_T, f, ctx.config.replicas, ctx.streams, "exp-moment", ctx.threads
    )
    weights = np.exp(values[:, 0])
    sigma = ctx.stats.standard_error(weights) / weights.mean()
    verdicts = [
        ctx.stats.within("exp-moment", "log_mean_exp", math.log(weights.mean()), exact, sigma)
    ]

    single = ctx.green(WiredDomain.from_sites(ctx.config.N, np.array([(1, 1)])))
    closed = 1.0 / (1 - 1.0 / 4)
    verdicts.append(
        ctx.stats.within(
            "exp-moment-single-site", "log_mgf", ctx.iso.exp_moment(single, np.ones(1), 1.0), closed, 1e-12, k=1.0
        )
    )
    # t = 1, f = 1 on one site: log E exp(L) = t s / (1 - s G) with G = 1/4
    values, _ = ctx.walks.local_time_functionals(
        single.domain, 1.0, np.ones(1), ctx.config.replicas, ctx.streams, "exp-moment-single-site",
        ctx.threads,
    )
    weights = np.exp(values[:, 0])
    verdicts.append(
        ctx.stats.within(
            "exp-moment-single-site-walk",
            "log_mean_exp",
            math.log(weights.mean()),
            closed,
            ctx.stats.standard_error(weights) / weights.mean(),
        )
    )
    return verdicts


def _ray_knight(ctx: RunContext, green, probes: list[np.ndarray]) -> list[Verdict]:
    stats = ctx.stats
    verdicts = []
    datasets = ctx.iso.ray_knight_datasets(
        green, RAY_KNIGHT_T, ctx.config.replicas, probes, ctx.streams, threads=ctx.threads
    )
    for j, data in enumerate(datasets):
        a, b = data.walk_side.values, data.field_side.values
        se = math.hypot(stats.standard_error(a), stats.standard_error(b))
        verdicts.append(
            stats.within(f"ray-knight-mean-{j}", "mean_diff", a.mean() - b.mean(), 0.0, se)
        )
        se2 = math.hypot(stats.standard_error(a**2), stats.standard_error(b**2))
        verdicts.append(
            stats.within(f"ray-knight-second-{j}", "second_moment_diff", (a**2).mean() - (b**2).mean(), 0.0, se2)
        )
        _, p = stats.ks_two_sample(data.walk_side, data.field_side)
        verdicts.append(stats.p_value(f"ray-knight-ks-{j}", p, tests=len(datasets)))

    single = ctx.green(WiredDomain.from_sites(ctx.config.N, np.array([(1, 1)])))
    for shift in (0.0, 1.0):
        (data,) = ctx.iso.ray_knight_datasets(
            single, RAY_KNIGHT_T, ctx.config.replicas, [np.ones(1)], ctx.streams, shift=shift,
            threads=ctx.threads,
        )
        _, p = stats.ks_two_sample(data.walk_side, data.field_side)
        verdicts.append(stats.p_value(f"ray-knight-single-site-shift-{shift:g}", p, tests=2))
    return verdicts


def _clt(ctx: RunContext, green, probe: np.ndarray) -> list[Verdict]:
    stats = ctx.stats
    datasets = ctx.iso.clt_datasets(
        green, CLT_TIMES, probe, ctx.config.replicas, ctx.streams, ctx.threads
    )
    last = datasets[-1]
    _, p = stats.ks_normal(last.standardized, last.variance)
    _, p_root = stats.ks_normal(last.root, last.variance / 2)
    skews = [abs(stats.skewness(d.standardized)) for d in datasets]
    for d, skew in zip(datasets, skews):
        ctx.report(f"clt_skewness_t{d.t:g}", skew)
    return [
        stats.p_value("clt-normal", p, tests=2),
        stats.p_value("clt-sqrt-normal", p_root, tests=2),
        stats.decreasing("clt-skewness", "abs_skewness", list(skews)),
    ]


def _hitting(ctx: RunContext, green) -> list[Verdict]:
    domain = green.domain
    centre = np.rint(domain.sites.mean(axis=0)).astype(int)
    index = domain.index_of(tuple(centre))
    sites = np.array([index if index >= 0 else domain.n // 2])
    verdicts = []
    for row in ctx.iso.hitting_identity(green, sites, ctx.config.replicas, ctx.streams):
        verdicts.append(ctx.stats.within("hitting-identity", "pi_G_P", row.pi_green * row.escape_prob, 1.0, row.sigma))
        verdicts.append(
            ctx.stats.within("hitting-reversibility", "gap", row.reversibility_gap, 0.0, row.reversibility_sigma)
        )
    return verdicts


def verify_isomorphism(ctx: RunContext) -> list[Verdict]:
    green = ctx.green()
    n = green.n
    rng = ctx.streams("probes")
    f = rng.random(n)
    probes = [rng.random(n) for _ in range(ctx.config.probes)]

    verdicts = []
    verdicts += _kac(ctx, green, f)
    verdicts += _exp_moment(ctx, green, 0.2 * f)
    verdicts += _ray_knight(ctx, green, probes)
    verdicts += _clt(ctx, green, probes[0] / np.sqrt(n))
    verdicts += _hitting(ctx, green)
    return verdicts
