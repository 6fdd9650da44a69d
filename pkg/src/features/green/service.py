"""
GreenService.

Exact Green function of wired domains (factorization and potential-kernel routes), discrete
harmonic measure, and the continuum quantities they converge to.
"""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from scipy import integrate

from config.settings import settings
from core.errors import CoincidentPoints, PointTooCloseToBoundary
from core.service import Service
from features.green.backends import DenseBackend, SparseBackend, SpectralBackend
from features.green.models.operator import GreenOperator, HarmonicMeasureTable
from features.lattice.models.continuum import ContinuumDomain
from features.lattice.models.wired import WiredDomain
from features.lattice.service import LatticeService
from features.potential.constants import c0, g
from features.potential.service import PotentialKernel

Method = Literal["auto", "dense", "sparse", "spectral"]


class GreenService(Service):
    def __init__(self, kernel: Optional[PotentialKernel] = None):
        super().__init__()
        self.kernel = kernel or PotentialKernel()
        self.lattice = LatticeService()

    @property
    def service_signature(self) -> str:
        return "green_svc"

    def solve_green(self, domain: WiredDomain, method: Method = "auto") -> GreenOperator:
        if method == "auto":
            if domain.n < settings.dense_cutoff:
                method = "dense"
            elif domain.is_box:
                method = "spectral"
            else:
                method = "sparse"

        with self.stage("factorize", n=domain.n, method=method):
            if method == "spectral":
                backend = SpectralBackend.for_domain(domain)
            elif method == "dense":
                backend = DenseBackend(domain.laplacian())
            else:
                backend = SparseBackend(domain.laplacian())

        diagonal_method = "direct"
        if backend.diagonal() is None:
            diagonal_method = "embedding" if domain.n >= settings.dense_cutoff else "solves"
        return GreenOperator(domain=domain, backend=backend, diagonal_method=diagonal_method)

    def harmonic_measure(
        self, green: GreenOperator, sources: np.ndarray
    ) -> HarmonicMeasureTable:
        """
        Exit distribution through each boundary edge.

        Unit data on slot (s, d) makes the Dirichlet solution G(., s), so row x is read off the
        column G(., x) at the slot sites.
        """
        sources = np.asarray(sources, dtype=np.int64)
        slot_sites, slot_dirs, points = green.domain.exit_slots
        cols = green.columns(sources)
        values = np.clip(cols[slot_sites, :].T, 0.0, None)
        return HarmonicMeasureTable(
            sources=sources,
            slot_sites=slot_sites,
            slot_directions=slot_dirs,
            points=points,
            values=values,
        )

    def green_via_kernel(
        self, green: GreenOperator, x: int, y: int, table: HarmonicMeasureTable | None = None
    ) -> float:
        """-a(x - y) + sum_z H(x, z) a(z - y)."""
        return float(self.green_via_kernel_rows(green, np.array([x]), table)[0, y])

    def green_via_kernel_rows(
        self,
        green: GreenOperator,
        sources: np.ndarray,
        table: HarmonicMeasureTable | None = None,
    ) -> np.ndarray:
        """Rows G(x, .) for each source x, computed through the potential kernel."""
        sources = np.asarray(sources, dtype=np.int64)
        table = table or self.harmonic_measure(green, sources)
        sites = green.domain.sites
        # a(z - y) for every exit slot z and every site y
        slot_kernel = self.kernel.eval_many(
            (table.points[:, None, :] - sites[None, :, :]).reshape(-1, 2)
        ).reshape(len(table.points), len(sites))
        direct = self.kernel.eval_many(
            (sites[sources][:, None, :] - sites[None, :, :]).reshape(-1, 2)
        ).reshape(len(sources), len(sites))
        return -direct + table.values @ slot_kernel

    def conformal_radius(self, domain: ContinuumDomain, N: int, x: tuple[float, float]) -> float:
        """exp{ sum_z H(floor(xN), z) log(|z - floor(xN)| / N) } on the admissible D_N."""
        point = np.asarray([x], dtype=float)
        if not domain.contains(point)[0] or domain.boundary_distance(point)[0] <= 2.0 / N:
            raise PointTooCloseToBoundary(f"{x} is within 2/N of the boundary at N={N}")

        wired = self.lattice.discretize(domain, N)
        site = np.floor(point[0] * N).astype(np.int64)
        index = wired.indices_of(site[None, :])[0]
        if index < 0:
            raise PointTooCloseToBoundary(f"{x} falls outside D_N at N={N}")

        green = self.solve_green(wired)
        table = self.harmonic_measure(green, np.array([index]))
        distances = np.hypot(*(table.points - site).T) / N
        return float(np.exp(table.values[0] @ np.log(distances)))

    def conformal_radius_field(self, green: GreenOperator) -> np.ndarray:
        """
        Discrete conformal radius at every site from the diagonal:
        G(x, x) = g log N + c0 + g log r_N(x) up to O(N^-2) kernel corrections.
        """
        return np.exp((green.diagonal() - c0) / g - np.log(green.domain.N))

    def diagonal_gap(self, green: GreenOperator, index: int, radius: float = 1.0) -> float:
        """G(x, x) - g log N - c0 - g log r; tends to 0 with N."""
        N = green.domain.N
        return float(green.diagonal()[index] - g * np.log(N) - c0 - g * np.log(radius))

    def upper_bound_constant(self, green: GreenOperator, max_sources: int = 128) -> float:
        """Smallest c with G(x, y) <= g log(N / (1 + |x - y|)) + c over sampled sources."""
        domain = green.domain
        step = max(1, domain.n // max_sources)
        sources = np.arange(0, domain.n, step)[:max_sources]
        cols = green.columns(sources)
        gaps = domain.sites[:, None, :] - domain.sites[None, sources, :]
        dist = np.hypot(gaps[..., 0], gaps[..., 1])
        bound = g * np.log(domain.N / (1.0 + dist))
        return float((cols - bound).max())

    @staticmethod
    def continuum_green_disc(x: tuple[float, float], y: tuple[float, float]) -> float:
        """
        Continuum Green function of the unit disc,
        -g log|x - y| + g int Poisson(x, z) log|z - y| dz, by boundary quadrature.
        """
        xc, yc = complex(*x), complex(*y)
        if abs(xc - yc) == 0:
            raise CoincidentPoints(f"{x} == {y}")
        if abs(xc) >= 1 or abs(yc) >= 1:
            raise PointTooCloseToBoundary("points must lie in the open unit disc")

        def integrand(theta: float) -> float:
            z = np.exp(1j * theta)
            poisson = (1 - abs(xc) ** 2) / (2 * np.pi * abs(z - xc) ** 2)
            return poisson * np.log(abs(z - yc))

        boundary, _ = integrate.quad(
            integrand, -np.pi, np.pi, epsabs=1e-13, epsrel=1e-12, limit=400
        )
        return float(-g * np.log(abs(xc - yc)) + g * boundary)

    @staticmethod
    def disc_green_closed_form(x: tuple[float, float], y: tuple[float, float]) -> float:
        xc, yc = complex(*x), complex(*y)
        return float(g * np.log(abs(1 - xc * yc.conjugate()) / abs(xc - yc)))

    @staticmethod
    def diagonal_rows(green: GreenOperator) -> tuple[list[str], list[tuple]]:
        header = ["ix", "iy", "Gxx"]
        data = [
            (int(x), int(y), float(v))
            for (x, y), v in zip(green.domain.sites, green.diagonal())
        ]
        return header, data

    @staticmethod
    def harmonic_rows(table: HarmonicMeasureTable, domain: WiredDomain) -> tuple[list[str], list[tuple]]:
        header = ["source_ix", "source_iy", "zx", "zy", "H"]
        data = []
        for i, source in enumerate(table.sources):
            sx, sy = domain.sites[source]
            for (zx, zy), h in zip(table.points, table.values[i]):
                data.append((int(sx), int(sy), int(zx), int(zy), float(h)))
        return header, data
