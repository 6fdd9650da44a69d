"""
IsomorphismService.

Exact evaluation of the Kac moment formula and the exponential-moment identity for the local
time, and Monte-Carlo datasets for the CLT and the second Ray-Knight identity.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from core.errors import ContractionViolated
from core.rng import StreamFactory
from core.service import Service
from features.dgff.service import DgffService
from features.green.models.operator import GreenOperator
from features.isomorphism.models.datasets import CltDataset, RayKnightDataset
from features.stats.models.sample_set import SampleSet
from features.walk.service import HittingRow, WalkService

POWER_TOLERANCE = 1e-8
POWER_MAX_ITERATIONS = 10_000


class IsomorphismService(Service):
    def __init__(self, walks: Optional[WalkService] = None, dgff: Optional[DgffService] = None):
        super().__init__()
        self.walks = walks or WalkService()
        self.dgff = dgff or DgffService()

    @property
    def service_signature(self) -> str:
        return "isomorphism_svc"

    @staticmethod
    def _test_function(green: GreenOperator, f: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float).ravel()
        if f.shape != (green.n,):
            raise ValueError(f"test function has {f.size} values for {green.n} sites")
        return f

    def kac_moment(self, green: GreenOperator, f: np.ndarray, n: int) -> float:
        """n! / pi(rho) <f, (G M_f)^{n-1} 1> for the local time of one excursion."""
        if n < 1:
            raise ValueError("moment order must be positive")
        f = self._test_function(green, f)
        v = np.ones(green.n)
        for _ in range(n - 1):
            v = green.apply(f * v)
        return math.factorial(n) * float(f @ v) / green.domain.pi_rho

    def spectral_radius(self, green: GreenOperator, f: np.ndarray) -> float:
        """
        Power iteration for G M_f in the energy inner product <u, v>_A = u^T A v, where the
        operator is self-adjoint; ||G M_f v||_A^2 = (f v) . (G M_f v).
        """
        f = self._test_function(green, f)
        if not f.any():
            return 0.0
        v = 1.0 + 0.5 * np.sin(np.arange(green.n, dtype=float))
        norm = math.sqrt(float(v @ (green.domain.laplacian() @ v)))
        v /= norm
        estimate = 0.0
        for iteration in range(POWER_MAX_ITERATIONS):
            w = green.apply(f * v)
            norm = math.sqrt(max(float((f * v) @ w), 0.0))
            if norm == 0.0:
                return 0.0
            v = w / norm
            if abs(norm - estimate) <= POWER_TOLERANCE * max(norm, 1.0):
                self.logger.bind(iterations=iteration + 1).debug("power iteration converged")
                return norm
            estimate = norm
        self.logger.warning("power iteration hit the cap with radius ~ {:.6g}", estimate)
        return estimate

    def exp_moment(self, green: GreenOperator, f: np.ndarray, t: float) -> float:
        """
        log E^rho exp<L_t, f> = t <f, (1 - G M_f)^{-1} 1>.

        (1 - G M_f)^{-1} 1 solves (A - M_f) u = A 1, and A 1 is the boundary-edge count.
        """
        f = self._test_function(green, f)
        if not f.any():
            return 0.0
        radius = self.spectral_radius(green, f)
        if radius >= 1.0:
            raise ContractionViolated(radius)
        domain = green.domain
        shifted = (domain.laplacian() - sparse.diags(f)).tocsc()
        u = spsolve(shifted, domain.boundary_edge_count.astype(float))
        return t * float(f @ u)

    def ray_knight_datasets(
        self,
        green: GreenOperator,
        t: float,
        replicas: int,
        probes: Sequence[np.ndarray],
        streams: StreamFactory,
        shift: float = 0.0,
        threads: Optional[int] = None,
    ) -> list[RayKnightDataset]:
        """
        Walk side <f, L_t + (h + sqrt(2 shift))^2/2> against field side
        <f, (h~ + sqrt(2 (t + shift)))^2 / 2>; shift = 0 is the plain identity. Only equality in
        law is tested, the coupling itself is never built.
        """
        if t <= 0:
            raise ValueError("t must be positive")
        domain = green.domain
        P = np.stack([self._test_function(green, p) for p in probes], axis=1)
        with self.stage("ray_knight", n=domain.n, t=t, replicas=replicas, shift=shift):
            local, _ = self.walks.local_time_functionals(
                domain, t, P, replicas, streams, "ray-knight-walk", threads
            )
            h = self.dgff.sample_fields(green, replicas, streams, "ray-knight-h", threads)
            walk_side = local + 0.5 * (h + math.sqrt(2 * shift)) ** 2 @ P
            del h
            h_tilde = self.dgff.sample_fields(green, replicas, streams, "ray-knight-h-tilde", threads)
            field_side = 0.5 * (h_tilde + math.sqrt(2 * (t + shift))) ** 2 @ P

        mean = (t + shift + 0.5 * green.diagonal()) @ P
        return [
            RayKnightDataset(
                probe=P[:, j],
                walk_side=SampleSet(walk_side[:, j], streams.tag("ray-knight-walk")),
                field_side=SampleSet(field_side[:, j], streams.tag("ray-knight-h-tilde")),
                expected_mean=float(mean[j]),
            )
            for j in range(P.shape[1])
        ]

    def clt_datasets(
        self,
        green: GreenOperator,
        t_list: Sequence[float],
        probe: np.ndarray,
        replicas: int,
        streams: StreamFactory,
        threads: Optional[int] = None,
    ) -> list[CltDataset]:
        """
        <f, (L_t - t)/sqrt(2t)> per t, limit Normal(0, <f, G f>), alongside
        <f, sqrt(L_t) - sqrt(t)>, limit Normal(0, <f, G f>/2).
        """
        if any(b <= a for a, b in zip(t_list, t_list[1:])):
            raise ValueError("t_list must be increasing")
        f = self._test_function(green, probe)
        variance = green.quadratic_form(f)
        datasets = []
        for index, t in enumerate(t_list):
            _, L, _ = self.walks.sample_profiles(
                green.domain, t, replicas, streams, purpose=f"clt-{index}", threads=threads
            )
            standardized = (L - t) @ f / math.sqrt(2 * t)
            root = (np.sqrt(L) - math.sqrt(t)) @ f
            datasets.append(
                CltDataset(
                    t=t,
                    standardized=SampleSet(standardized, streams.tag(f"clt-{index}")),
                    root=SampleSet(root, streams.tag(f"clt-{index}")),
                    variance=variance,
                )
            )
        return datasets


    def hitting_identity(
        self, green: GreenOperator, sites: np.ndarray, trials: int, streams: StreamFactory
    ) -> list[HittingRow]:
        """pi(y) G(y, y) P^y(H_rho < return to y) = 1 per site, plus the reversibility check."""
        sites = np.asarray(sites, dtype=np.int64)
        if sites.size == 0:
            raise ValueError("sites must be nonempty")
        with self.stage("hitting_identity", sites=int(sites.size), trials=trials):
            return self.walks.hitting_identity(green, sites, trials, streams)
