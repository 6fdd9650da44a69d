"""
green-check handler.

Potential-kernel sanity checks, the Green function of the configured domain cross-checked against
the potential-kernel representation, the upper-bound constant and the diagonal asymptotics.
"""

from __future__ import annotations

import numpy as np

from features.experiments.context import RunContext
from features.stats.models.verdict import Verdict

CROSS_CHECK_SOURCES = 8
CROSS_CHECK_MAX_SITES = 5000
SANDWICH_RADII = (10, 20, 50, 100, 200)


def _kernel_verdicts(ctx: RunContext) -> list[Verdict]:
    kernel = ctx.greens.kernel
    stats = ctx.stats
    verdicts = [
        stats.bound("kernel-origin", "abs_a0", abs(kernel((0, 0))), 0.0),
        stats.within("kernel-unit-step", "a_e1", kernel((1, 0)), 0.25, 1e-8, k=1.0),
        stats.bound("kernel-harmonicity", "max_residual", kernel.check_harmonicity(5), 1e-8),
    ]
    sandwich = max(
        abs(kernel.asymptotic_gap(x)) * float(np.hypot(*x)) ** 2
        for r in SANDWICH_RADII
        for x in ((r, 0), (r, r // 2), (r, r))
    )
    verdicts.append(stats.bound("kernel-asymptotics", "max_gap_times_norm2", sandwich, 1.0))
    return verdicts


def green_check(ctx: RunContext) -> list[Verdict]:
    domain = ctx.domain
    green = ctx.green()
    stats = ctx.stats

    header, rows = ctx.greens.diagonal_rows(green)
    ctx.writer.csv("diagonal", header, rows)
    ctx.writer.pgm("diagonal", domain.grid_values(green.diagonal()))

    step = max(1, domain.n // CROSS_CHECK_SOURCES)
    sources = np.arange(0, domain.n, step)[:CROSS_CHECK_SOURCES]
    table = ctx.greens.harmonic_measure(green, sources)
    header, rows = ctx.greens.harmonic_rows(table, domain)
    ctx.writer.csv("harmonic", header, rows)

    verdicts = _kernel_verdicts(ctx)
    # the kernel representation needs every slot-to-site offset
    if domain.n <= CROSS_CHECK_MAX_SITES:
        via_kernel = ctx.greens.green_via_kernel_rows(green, sources, table)
        gap = float(np.abs(via_kernel - green.columns(sources).T).max())
        verdicts.append(stats.bound("green-via-kernel", "max_abs_diff", gap, 1e-9))
    verdicts.append(
        stats.bound("green-upper-bound", "fitted_c", ctx.greens.upper_bound_constant(green), 2.0)
    )

    shape = ctx.config.domain
    centre = np.mean(shape.bounding_box(), axis=0)
    radius = shape.exact_conformal_radius(centre[None, :])
    N = ctx.config.N
    if radius is not None and shape.contains(centre[None, :])[0] and N >= 32:
        gaps = []
        for scale in (N // 4, N // 2, N):
            wired = ctx.lattice.discretize(shape, scale)
            index = wired.index_of(tuple(np.floor(centre * scale).astype(int)))
            gap = ctx.greens.diagonal_gap(ctx.green(wired), index, float(radius[0]))
            ctx.report(f"diagonal_gap_N{scale}", gap)
            gaps.append(abs(gap))
        verdicts.append(stats.decreasing("green-diagonal-asymptotics", "abs_gap", gaps))

    ctx.report("n_sites", domain.n)
    ctx.report("pi_rho", domain.pi_rho)
    return verdicts
