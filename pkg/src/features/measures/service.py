"""
MeasuresService.

Scaling constants, the thick/avoided/light point measures with their normalizations, exact first
moments, and the comparison of light-point histograms with the limit law mu.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from scipy import special

from core.errors import BadParameterRange, KindMismatch
from core.service import Service
from features.dgff.models.field import FieldSample
from features.green.models.operator import GreenOperator
from features.green.service import GreenService
from features.lattice.models.continuum import ContinuumDomain
from features.measures.models.histogram import LightPointHistogram
from features.measures.models.mu import MuMeasure
from features.measures.models.params import ScaleParams
from features.measures.models.point_measure import PointKind, PointMeasure
from features.potential.constants import alpha, c0, g
from features.walk.models.profile import LocalTimeProfile
from features.walk.service import WalkService

QUADRATURE_GRID = 200
SMALL_VALUE_EPS = (0.25, 0.5, 1.0)


class MeasuresService(Service):
    def __init__(self, greens: Optional[GreenService] = None):
        super().__init__()
        self.greens = greens or GreenService()

    @property
    def service_signature(self) -> str:
        return "measures_svc"

    def scale_params(
        self,
        N: int,
        lam: Optional[float] = None,
        theta: Optional[float] = None,
        a_N: Optional[float] = None,
        t_N: Optional[float] = None,
    ) -> ScaleParams:
        """
        a_N = 2 sqrt(g) lam log N and t_N = 2 g theta (log N)^2 unless overridden;
        K_N = N^2 e^{-a_N^2 / (2 g log N)} / sqrt(log N), hatK_N = N^2 e^{-t_N / (g log N)}.
        """
        if N < 4:
            raise BadParameterRange(f"N must be at least 4, got {N}")
        if lam is not None and not 0 < lam < 1:
            raise BadParameterRange(f"lambda must lie in (0, 1), got {lam}")
        if theta is not None and not theta > 0:
            raise BadParameterRange(f"theta must be positive, got {theta}")
        log_n = math.log(N)
        root_g = math.sqrt(g)
        fields = dict(
            N=N,
            lam=lam,
            theta=theta,
            g=g,
            c0=c0,
            alpha=alpha,
            m_N=2 * root_g * log_n - 0.75 * root_g * math.log(log_n),
        )
        if lam is not None or a_N is not None:
            a = a_N if a_N is not None else 2 * root_g * lam * log_n
            fields["a_N"] = a
            fields["K_N"] = N**2 * math.exp(-(a**2) / (2 * g * log_n)) / math.sqrt(log_n)
            if lam is not None:
                fields["c_hat"] = math.exp(2 * c0 * lam**2 / g) / math.sqrt(2 * math.pi * g)
        if theta is not None or t_N is not None:
            t = t_N if t_N is not None else 2 * g * theta * log_n**2
            fields["t_N"] = t
            fields["hatK_N"] = N**2 * math.exp(-t / (g * log_n))
        return ScaleParams(**fields)

    @staticmethod
    def level_thresholds(params: ScaleParams) -> tuple[float, float]:
        """Local-time levels 2g (sqrt(theta) +- lam)^2 (log N)^2 of the thick and thin sets."""
        if params.lam is None or params.theta is None:
            raise BadParameterRange("local-time level sets need both lambda and theta")
        root = math.sqrt(params.theta)
        scale = 2 * g * math.log(params.N) ** 2
        return scale * (root + params.lam) ** 2, scale * (root - params.lam) ** 2

    def build_point_measure(
        self,
        source: FieldSample | LocalTimeProfile,
        params: ScaleParams,
        kind: PointKind | str,
        cap: Optional[float] = None,
    ) -> PointMeasure:
        kind = PointKind(kind)
        is_field = isinstance(source, FieldSample)
        if (kind == PointKind.THICK) != is_field:
            raise KindMismatch(f"{kind.value} points cannot be read off {type(source).__name__}")
        positions = source.domain.continuum_positions()

        if kind == PointKind.THICK:
            if params.K_N is None:
                raise BadParameterRange("thick points need lambda or a_N")
            return PointMeasure(
                positions=positions,
                values=source.values - params.a_N,
                weight=1.0 / params.K_N,
                kind=kind,
                normalization="1/K_N",
            )

        if kind in (PointKind.AVOIDED, PointKind.LIGHT) and params.hatK_N is None:
            raise BadParameterRange(f"{kind.value} points need theta or t_N")
        if kind == PointKind.AVOIDED:
            keep = source.visits == 0
            return PointMeasure(
                positions=positions[keep],
                values=np.zeros(int(keep.sum())),
                weight=1.0 / params.hatK_N,
                kind=kind,
                normalization="1/hatK_N",
            )
        if kind == PointKind.LIGHT:
            if cap is None or cap <= 0:
                raise BadParameterRange("light points need a positive value cap")
            keep = source.L <= cap
            return PointMeasure(
                positions=positions[keep],
                values=source.L[keep],
                weight=1.0 / params.hatK_N,
                kind=kind,
                normalization="1/hatK_N",
            )

        upper, lower = self.level_thresholds(params)
        keep = source.L >= upper if kind == PointKind.LT_THICK else source.L <= lower
        return PointMeasure(
            positions=positions[keep],
            values=source.L[keep],
            weight=1.0 / params.K_N,
            kind=kind,
            normalization="1/K_N",
        )

    @staticmethod
    def light_measure_sqrt_log(measure: PointMeasure, params: ScaleParams) -> PointMeasure:
        """The same light points under sqrt(log N)/hatK_N."""
        return measure.rescaled(math.sqrt(math.log(params.N)), "sqrt(log N)/hatK_N")

    def thick_first_moment(
        self,
        green: GreenOperator,
        params: ScaleParams,
        domain: ContinuumDomain,
        region: Optional[ContinuumDomain] = None,
        b: float = 0.0,
    ) -> tuple[float, float]:
        """
        exact = (1/K_N) sum_{x in region} Q((a_N + b) / sqrt(G(x, x)));
        limit = c_hat (alpha lam)^{-1} e^{-alpha lam b} int_region r^D(x)^{2 lam^2} dx.
        """
        if params.lam is None:
            raise BadParameterRange("thick first moment needs lambda")
        wired = green.domain
        inside = (
            np.ones(wired.n, dtype=bool)
            if region is None
            else region.contains(wired.continuum_positions())
        )
        tails = special.ndtr(-(params.a_N + b) / np.sqrt(green.diagonal()[inside]))
        exact = float(tails.sum()) / params.K_N

        lam = params.lam
        integral = self._radius_integral(green, domain, region, 2 * lam**2)
        limit = params.c_hat / (alpha * lam) * math.exp(-alpha * lam * b) * integral
        self.logger.bind(N=wired.N, lam=lam, b=b).debug(
            "thick first moment exact={:.6g} limit={:.6g}", exact, limit
        )
        return exact, limit

    def _radius_integral(
        self,
        green: GreenOperator,
        domain: ContinuumDomain,
        region: Optional[ContinuumDomain],
        power: float,
    ) -> float:
        """Midpoint rule on a 200 x 200 grid; points within 2/N of the boundary are dropped."""
        N = green.domain.N
        (x0, y0), (x1, y1) = (region or domain).bounding_box()
        hx, hy = (x1 - x0) / QUADRATURE_GRID, (y1 - y0) / QUADRATURE_GRID
        xs = x0 + hx * (np.arange(QUADRATURE_GRID) + 0.5)
        ys = y0 + hy * (np.arange(QUADRATURE_GRID) + 0.5)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        points = np.stack([gx.ravel(), gy.ravel()], axis=1)

        keep = domain.contains(points) & (domain.boundary_distance(points) > 2.0 / N)
        if region is not None:
            keep &= region.contains(points)
        points = points[keep]

        radius = domain.exact_conformal_radius(points)
        if radius is None:
            field = self.greens.conformal_radius_field(green)
            index = green.domain.indices_of(np.floor(points * N).astype(np.int64))
            found = index >= 0
            radius = field[index[found]]
        return float((radius**power).sum() * hx * hy)

    @staticmethod
    def avoided_first_moment(green: GreenOperator, params: ScaleParams) -> float:
        """(1/hatK_N) sum_x exp(-t_N / G(x, x))."""
        if params.t_N is None:
            raise BadParameterRange("avoided first moment needs theta or t_N")
        return float(np.exp(-params.t_N / green.diagonal()).sum()) / params.hatK_N

    def avoided_first_moment_limit(
        self, green: GreenOperator, params: ScaleParams, domain: ContinuumDomain
    ) -> float:
        """e^{2 theta c0 / g} int_D r^D(x)^{2 theta} dx, the large-N value of the exact mean."""
        if params.theta is None:
            raise BadParameterRange("avoided first-moment limit needs theta")
        theta = params.theta
        integral = self._radius_integral(green, domain, None, 2 * theta)
        return math.exp(2 * theta * c0 / g) * integral

    @staticmethod
    def light_first_moment(
        green: GreenOperator, params: ScaleParams, b: float
    ) -> tuple[float, float]:
        """
        (exact, bound): (1/hatK_N) sum_x P(L_{t_N}(x) <= b) under the compound-Poisson law, and the
        same sum over the one-point bound exp(-(t/G) e^{-b/G}).
        """
        if params.t_N is None:
            raise BadParameterRange("light first moment needs theta or t_N")
        exact = WalkService.local_time_cdf_exact(green.diagonal(), params.t_N, b).sum()
        bound = WalkService.light_point_bound(green, params.t_N, b).sum()
        return float(exact) / params.hatK_N, float(bound) / params.hatK_N

    @staticmethod
    def mu(theta: float) -> MuMeasure:
        if not theta > 0:
            raise BadParameterRange(f"theta must be positive, got {theta}")
        return MuMeasure(theta=theta)

    @staticmethod
    def mu_eval(mu: MuMeasure, query: str, at: float) -> float:
        """query is one of density, laplace, laplace_quadrature, cdf."""
        handlers = {
            "density": mu.density,
            "laplace": mu.laplace,
            "laplace_quadrature": mu.laplace_quadrature,
            "cdf": mu.cdf,
        }
        if query not in handlers:
            raise ValueError(f"unknown mu query {query!r}")
        return handlers[query](at)

    def light_point_histogram(
        self,
        profiles: Sequence[LocalTimeProfile] | np.ndarray,
        params: ScaleParams,
        cap: float,
        bins: int = 8,
    ) -> LightPointHistogram:
        """
        Values L(x) <= cap over all sites and replicas, per replica and normalized by hatK_N,
        next to mu over the same bins. Also fits c in E theta_N(D x [0, cap]) <= c n / N^2 and
        the slope of the (0, eps] mass for small eps.
        """
        if cap <= 0:
            raise BadParameterRange("value cap must be positive")
        if params.hatK_N is None or params.theta is None:
            raise BadParameterRange("light points need theta")
        L = (
            np.asarray(profiles, dtype=float)
            if isinstance(profiles, np.ndarray)
            else np.stack([p.L for p in profiles])
        )
        replicas, n = L.shape
        scale = 1.0 / (params.hatK_N * replicas)

        edges = np.linspace(0.0, cap, bins + 1)
        lo = np.concatenate([[0.0], edges[:-1]])
        hi = np.concatenate([[0.0], edges[1:]])
        values = L.ravel()
        positive = values[(values > 0) & (values <= cap)]
        counts = np.concatenate(
            [[np.count_nonzero(values == 0)], np.histogram(positive, bins=edges)[0]]
        )
        empirical = counts * scale

        mu = self.mu(params.theta)
        target = np.array(
            [mu.atom_at_zero] + [mu.continuous_mass(a, b) for a, b in zip(lo[1:], hi[1:])]
        )

        total = empirical.sum()
        bound_constant = total / (n / params.N**2)
        eps = np.asarray(SMALL_VALUE_EPS)
        small = np.array([np.count_nonzero((values > 0) & (values <= e)) for e in eps]) * scale
        slope, intercept = np.polyfit(eps, small, 1)

        return LightPointHistogram(
            bin_lo=lo,
            bin_hi=hi,
            empirical=empirical,
            sqrt_log_empirical=empirical * math.sqrt(math.log(params.N)),
            mu_target=target,
            bound_constant=float(bound_constant),
            small_value_eps=eps,
            small_value_mass=small,
            small_value_slope=float(slope),
            small_value_intercept=float(intercept),
        )

    @staticmethod
    def max_diagnostics(maxima: np.ndarray, params: ScaleParams) -> dict[str, float]:
        """Median of max h against the leading order 2 sqrt(g) log N and against m_N."""
        median = float(np.median(maxima))
        leading = 2 * math.sqrt(g) * math.log(params.N)
        return {
            "median_max": median,
            "leading_order": leading,
            "m_N": params.m_N,
            "ratio_leading": median / leading,
            "ratio_m_N": median / params.m_N,
        }
