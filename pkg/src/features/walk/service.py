"""
WalkService.

Continuous-time simple random walk on the wired graph observed through excursions from rho.
The local time at rho after N excursions is a sum of N independent Exp(1)/pi(rho) holdings, so
L_t is assembled from Poisson(pi(rho) t) excursions; continuous time enters only through one Exp(1)
holding per visit.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from pydantic import BaseModel
from scipy import stats

from config.settings import settings
from core.errors import StepLimitExceeded
from core.pool import map_ordered
from core.rng import StreamFactory, chunk_bounds
from core.service import Service
from features.green.models.operator import GreenOperator
from features.lattice.models.wired import WiredDomain
from features.walk import kernels
from features.walk.models.profile import CoverTime, ExcursionRecord, HoldingMode, LocalTimeProfile

PI_SITE = 4.0


class HittingRow(BaseModel):
    site: tuple[int, int]
    escape_prob: float
    escape_sigma: float
    pi_green: float
    deviation: float
    sigma: float
    hit_prob: float
    hit_sigma: float
    reversibility_gap: float
    reversibility_sigma: float


def _checked(steps: int) -> int:
    if steps < 0:
        raise StepLimitExceeded(f"walk exceeded {settings.step_limit} steps")
    return int(steps)


class WalkService(Service):
    def __init__(self, step_limit: Optional[int] = None):
        super().__init__()
        self.step_limit = settings.step_limit if step_limit is None else step_limit

    @property
    def service_signature(self) -> str:
        return "walk_svc"

    def run_excursion(self, domain: WiredDomain, rng: np.random.Generator) -> ExcursionRecord:
        visits = np.zeros(domain.n, dtype=np.int64)
        steps = kernels.excursion(
            domain.neighbors, domain.entry_sites, rng, visits, self.step_limit
        )
        return ExcursionRecord(visits=visits, steps=_checked(steps))

    @staticmethod
    def _local_time(
        visits: np.ndarray, mode: HoldingMode, rng: np.random.Generator
    ) -> np.ndarray:
        if mode == HoldingMode.VISIT_COUNT:
            return visits / PI_SITE
        return rng.standard_gamma(visits.astype(float)) / PI_SITE

    def sample_local_time(
        self,
        domain: WiredDomain,
        t: float,
        rng: np.random.Generator,
        mode: HoldingMode = HoldingMode.EXPONENTIAL,
        seed_tag: str = "",
    ) -> LocalTimeProfile:
        if t < 0:
            raise ValueError("t must be non-negative")
        count = int(rng.poisson(domain.pi_rho * t)) if t > 0 else 0
        visits = np.zeros((1, domain.n), dtype=np.int64)
        _checked(
            kernels.replica_visits(
                domain.neighbors,
                domain.entry_sites,
                np.array([count], dtype=np.int64),
                rng,
                self.step_limit,
                visits,
            )
        )
        return LocalTimeProfile(
            domain=domain,
            t=t,
            L=self._local_time(visits[0], mode, rng),
            visits=visits[0],
            n_excursions=count,
            mode=mode,
            seed_tag=seed_tag,
        )

    def _chunked(self, total: int, work, threads: Optional[int]):
        return map_ordered(work, chunk_bounds(total, settings.chunk_size), threads)

    def sample_profiles(
        self,
        domain: WiredDomain,
        t: float,
        replicas: int,
        streams: StreamFactory,
        purpose: str = "walk",
        mode: HoldingMode = HoldingMode.EXPONENTIAL,
        threads: Optional[int] = None,
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(visits, L, n_excursions) for independent replicas, in replica order."""

        def work(bounds):
            lo, hi = bounds
            rng = streams(purpose, replica=lo // settings.chunk_size)
            counts = rng.poisson(domain.pi_rho * t, size=hi - lo).astype(np.int64)
            visits = np.zeros((hi - lo, domain.n), dtype=np.int64)
            _checked(
                kernels.replica_visits(
                    domain.neighbors, domain.entry_sites, counts, rng, self.step_limit, visits
                )
            )
            return visits, self._local_time(visits, mode, rng), counts

        with self.stage("sample_profiles", n=domain.n, t=t, replicas=replicas):
            parts = self._chunked(replicas, work, threads)
        visits = np.vstack([p[0] for p in parts])
        L = np.vstack([p[1] for p in parts])
        counts = np.concatenate([p[2] for p in parts])
        return visits, L, counts

    def local_time_functionals(
        self,
        domain: WiredDomain,
        t: Optional[float],
        probes: np.ndarray,
        replicas: int,
        streams: StreamFactory,
        purpose: str,
        threads: Optional[int] = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        <L, f_j> for each probe column f_j (probes is (n, p)) and each replica, without keeping
        the profiles. With t=None every replica is one excursion (the excursion local time).
        """
        probes = np.asarray(probes, dtype=float).reshape(domain.n, -1)

        def work(bounds):
            lo, hi = bounds
            rng = streams(purpose, replica=lo // settings.chunk_size)
            if t is None:
                counts = np.ones(hi - lo, dtype=np.int64)
            else:
                counts = rng.poisson(domain.pi_rho * t, size=hi - lo).astype(np.int64)
            visits = np.zeros((hi - lo, domain.n), dtype=np.int64)
            _checked(
                kernels.replica_visits(
                    domain.neighbors, domain.entry_sites, counts, rng, self.step_limit, visits
                )
            )
            L = self._local_time(visits, HoldingMode.EXPONENTIAL, rng)
            return L @ probes, counts

        with self.stage("local_time_functionals", n=domain.n, replicas=replicas, purpose=purpose):
            parts = self._chunked(replicas, work, threads)
        return np.vstack([p[0] for p in parts]), np.concatenate([p[1] for p in parts])

    def excursion_hits(
        self,
        domain: WiredDomain,
        count: int,
        streams: StreamFactory,
        purpose: str = "hits",
        threads: Optional[int] = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Per-site (number of excursions hitting the site, total visits) over `count` excursions."""

        def work(bounds):
            lo, hi = bounds
            rng = streams(purpose, replica=lo // settings.chunk_size)
            visits = np.zeros((hi - lo, domain.n), dtype=np.int64)
            _checked(
                kernels.replica_visits(
                    domain.neighbors,
                    domain.entry_sites,
                    np.ones(hi - lo, dtype=np.int64),
                    rng,
                    self.step_limit,
                    visits,
                )
            )
            return (visits > 0).sum(axis=0), visits.sum(axis=0)

        parts = self._chunked(count, work, threads)
        return sum(p[0] for p in parts), sum(p[1] for p in parts)

    @staticmethod
    def avoided_set(profile: LocalTimeProfile) -> np.ndarray:
        """Indices of sites never visited, in canonical order."""
        return np.flatnonzero(profile.visits == 0)

    @staticmethod
    def avoidance_prob_exact(green: GreenOperator, t: float) -> np.ndarray:
        """P(L_t(x) = 0) = exp(-t / G(x, x))."""
        return np.exp(-t / green.diagonal())

    @staticmethod
    def light_point_bound(green: GreenOperator, t: float, b: float) -> np.ndarray:
        """Upper bound exp(-(t/G) e^{-b/G}) on P(L_t(x) <= b)."""
        G = green.diagonal()
        return np.exp(-(t / G) * np.exp(-b / G))

    @staticmethod
    def local_time_cdf_exact(diagonal: np.ndarray, t: float, b: float) -> np.ndarray:
        """
        P(L_t(x) <= b): L_t(x) is a Poisson(t/G) sum of exponentials with mean G.
        """
        G = np.asarray(diagonal, dtype=float)
        rate = t / G
        top = int(np.ceil(rate.max() + 12 * np.sqrt(rate.max()) + 30))
        k = np.arange(1, top + 1)[:, None]
        weights = stats.poisson.pmf(k, rate[None, :])
        tails = stats.gamma.cdf(b, a=k, scale=G[None, :])
        return np.exp(-rate) + (weights * tails).sum(axis=0)

    @staticmethod
    def sample_local_time_exact(
        diagonal: np.ndarray, t: float, size: int, rng: np.random.Generator
    ) -> np.ndarray:
        """Draws of L_t(x) from the compound-Poisson representation, per site (size, n)."""
        G = np.asarray(diagonal, dtype=float)
        counts = rng.poisson(t / G, size=(size, len(G)))
        return rng.standard_gamma(counts.astype(float)) * G

    def cover_time(self, domain: WiredDomain, rng: np.random.Generator) -> CoverTime:
        """
        rho-local time at coverage: one Exp(1)/pi(rho) holding precedes each excursion up to and
        including the covering one.
        """
        excursions, steps = kernels.cover_run(
            domain.neighbors, domain.entry_sites, rng, self.step_limit
        )
        steps = _checked(steps)
        t_cover = float(rng.standard_gamma(float(excursions))) / domain.pi_rho
        return CoverTime(t_cover=t_cover, natural_steps=steps, n_excursions=int(excursions))

    def cover_times(
        self,
        domain: WiredDomain,
        replicas: int,
        streams: StreamFactory,
        purpose: str = "cover",
        threads: Optional[int] = None,
    ) -> list[CoverTime]:
        return map_ordered(
            lambda r: self.cover_time(domain, streams(purpose, replica=r)),
            list(range(replicas)),
            threads,
        )

    def escape_probability(
        self, domain: WiredDomain, site: int, trials: int, rng: np.random.Generator
    ) -> float:
        """P^y(H_rho < return to y)."""
        escaped = _checked(
            kernels.escape_trials(domain.neighbors, site, trials, rng, self.step_limit)
        )
        return escaped / trials

    def exit_frequencies(
        self, domain: WiredDomain, site: int, trials: int, rng: np.random.Generator
    ) -> np.ndarray:
        """Counts per exit slot, ordered as domain.exit_slots."""
        out = np.zeros((domain.n, 4), dtype=np.int64)
        _checked(kernels.exit_counts(domain.neighbors, site, trials, rng, self.step_limit, out))
        slot_sites, slot_dirs, _ = domain.exit_slots
        return out[slot_sites, slot_dirs]

    def hitting_identity(
        self,
        green: GreenOperator,
        sites: np.ndarray,
        trials: int,
        streams: StreamFactory,
    ) -> list[HittingRow]:
        """
        Escape probabilities against 1/(pi(y) G(y, y)) and the reversibility identity
        pi(rho) P^rho(H_y < H_rho^+) = pi(y) P^y(H_rho < H_y^+).
        """
        domain = green.domain
        diag = green.diagonal()
        hits, _ = self.excursion_hits(domain, trials, streams, purpose="hitting-rho")
        rows = []
        for y in np.asarray(sites, dtype=np.int64):
            p = self.escape_probability(domain, int(y), trials, streams("hitting-site", int(y)))
            escape_sigma = np.sqrt(p * (1 - p) / trials)
            pi_green = PI_SITE * diag[y]
            q = hits[y] / trials
            q_sigma = np.sqrt(q * (1 - q) / trials)
            rows.append(
                HittingRow(
                    site=(int(domain.sites[y, 0]), int(domain.sites[y, 1])),
                    escape_prob=p,
                    escape_sigma=float(escape_sigma),
                    pi_green=float(pi_green),
                    deviation=float(abs(pi_green * p - 1)),
                    sigma=float(pi_green * escape_sigma),
                    hit_prob=float(q),
                    hit_sigma=float(q_sigma),
                    reversibility_gap=float(domain.pi_rho * q - PI_SITE * p),
                    reversibility_sigma=float(
                        np.hypot(domain.pi_rho * q_sigma, PI_SITE * escape_sigma)
                    ),
                )
            )
        return rows
