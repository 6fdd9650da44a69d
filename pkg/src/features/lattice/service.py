"""
LatticeService.

Discretizes continuum domains into wired lattice domains and checks the wired-graph invariants.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from pydantic import BaseModel
from scipy import ndimage
from scipy.sparse import csgraph

from core.errors import EmptyDomain, InvariantViolation
from core.service import Service
from features.lattice import geometry
from features.lattice.models.continuum import ContinuumDomain, Disc, Polygon, Rectangle
from features.lattice.models.wired import RHO, WiredDomain

# Float decisions closer than this (in lattice units) are re-decided exactly.
_TIE_BAND = 1e-9


class DomainReport(BaseModel):
    n: int
    pi_rho: int
    lower: tuple[int, int]
    upper: tuple[int, int]
    is_box: bool


class LatticeService(Service):
    @property
    def service_signature(self) -> str:
        return "lattice_svc"

    def discretize(self, domain: ContinuumDomain, N: int) -> WiredDomain:
        """
        Maximal admissible approximation of `domain` at scale N.

        A lattice point x qualifies when the open square of half-side 1 around x lies inside N*D,
        i.e. d_inf(x/N, R^2 \\ D) >= 1/N; the largest 4-connected component is kept.
        """
        if N < 1:
            raise InvariantViolation("scale", f"N must be positive, got {N}")

        mask, origin = self._candidate_mask(domain, N)
        if not mask.any():
            raise EmptyDomain(f"no lattice point qualifies for {domain.shape} at N={N}")

        labels, count = ndimage.label(mask)
        if count > 1:
            sizes = np.bincount(labels.ravel())[1:]
            # ties go to the component holding the lexicographically first site
            keep = int(np.argmax(sizes)) + 1
            mask = labels == keep

        gx, gy = np.nonzero(mask)
        points = np.stack([gx + origin[0], gy + origin[1]], axis=1)
        wired = WiredDomain.from_sites(N, points, label=f"{domain.shape}@{N}")
        self.logger.bind(N=N, n=wired.n, pi_rho=wired.pi_rho).debug(
            "discretized {} into {} sites", domain.shape, wired.n
        )
        return wired

    def _candidate_mask(
        self, domain: ContinuumDomain, N: int
    ) -> tuple[np.ndarray, tuple[int, int]]:
        (x_lo, y_lo), (x_hi, y_hi) = domain.bounding_box()
        ox, oy = math.floor(N * x_lo), math.floor(N * y_lo)
        wx = math.ceil(N * x_hi) - ox + 1
        wy = math.ceil(N * y_hi) - oy + 1

        if isinstance(domain, Rectangle):
            return self._rectangle_mask(domain, N, (ox, oy), (wx, wy)), (ox, oy)

        gx, gy = np.meshgrid(np.arange(wx), np.arange(wy), indexing="ij")
        centers = np.stack([(gx + ox).ravel(), (gy + oy).ravel()], axis=1).astype(float)

        if isinstance(domain, Disc):
            mask = self._disc_mask(domain, N, centers)
        elif isinstance(domain, Polygon):
            mask = self._polygon_mask(domain, N, centers)
        else:
            raise InvariantViolation("shape", f"unsupported shape {domain!r}")
        return mask.reshape(wx, wy), (ox, oy)

    @staticmethod
    def _rectangle_mask(
        domain: Rectangle, N: int, origin: tuple[int, int], shape: tuple[int, int]
    ) -> np.ndarray:
        bounds = []
        for axis in range(2):
            lo = Fraction(domain.lower[axis]) * N + 1
            hi = Fraction(domain.upper[axis]) * N - 1
            bounds.append((math.ceil(lo), math.floor(hi)))
        mask = np.zeros(shape, dtype=bool)
        (x0, x1), (y0, y1) = bounds
        xs = slice(max(x0 - origin[0], 0), max(x1 - origin[0] + 1, 0))
        ys = slice(max(y0 - origin[1], 0), max(y1 - origin[1] + 1, 0))
        mask[xs, ys] = True
        return mask

    @staticmethod
    def _disc_mask(domain: Disc, N: int, centers: np.ndarray) -> np.ndarray:
        c = np.asarray(domain.center) * N
        far = np.abs(centers - c) + 1.0
        margin = (domain.radius * N) ** 2 - (far**2).sum(axis=1)
        mask = margin > 0
        scale = max(1.0, (domain.radius * N) ** 2)
        for i in np.flatnonzero(np.abs(margin) <= _TIE_BAND * scale):
            qc = geometry.to_q(centers[i])
            qd = (Fraction(domain.center[0]) * N, Fraction(domain.center[1]) * N)
            mask[i] = geometry.box_inside_disc(qc, Fraction(1), qd, Fraction(domain.radius) * N)
        return mask

    @staticmethod
    def _polygon_mask(domain: Polygon, N: int, centers: np.ndarray) -> np.ndarray:
        scaled = Polygon.model_construct(
            shape="polygon", vertices=tuple((x * N, y * N) for x, y in domain.vertices)
        )
        distance = scaled.boundary_distance(centers)
        inside = scaled.contains(centers)
        # the unit square around x holds the unit disc and sits in the disc of radius sqrt(2)
        mask = inside & (distance >= np.sqrt(2) + _TIE_BAND)
        band = np.flatnonzero(
            (distance >= 1 - _TIE_BAND) & (distance < np.sqrt(2) + _TIE_BAND)
        )
        qverts = [
            (Fraction(x) * N, Fraction(y) * N) for x, y in domain.vertices
        ]
        for i in band:
            mask[i] = geometry.box_inside_polygon(
                geometry.to_q(centers[i]), Fraction(1), qverts
            )
        return mask

    def validate(self, domain: WiredDomain) -> DomainReport:
        """Assert the wired-graph invariants; raises InvariantViolation naming the first failure."""
        if domain.n == 0:
            raise InvariantViolation("nonempty", "domain has no sites")

        order = np.lexsort((domain.sites[:, 1], domain.sites[:, 0]))
        if not np.array_equal(order, np.arange(domain.n)):
            raise InvariantViolation("ordering", "sites are not lexicographically sorted")

        inner = (domain.neighbors != RHO).sum(axis=1)
        if np.any(inner + domain.boundary_edge_count != 4):
            raise InvariantViolation("degree", "some site does not have 4 incident edges")

        for k, step in enumerate(((1, 0), (-1, 0), (0, 1), (0, -1))):
            target = domain.indices_of(domain.sites + np.asarray(step))
            if not np.array_equal(target, domain.neighbors[:, k]):
                raise InvariantViolation("adjacency", f"neighbor slot {k} disagrees with sites")

        if domain.pi_rho != int(domain.boundary_edge_count.sum()) or domain.pi_rho < 4:
            raise InvariantViolation("pi_rho", f"pi(rho) = {domain.pi_rho}")

        graph = domain.laplacian()
        count, _ = csgraph.connected_components(graph, directed=False)
        if count != 1:
            raise InvariantViolation("connectivity", f"{count} site components")

        report = DomainReport(
            n=domain.n,
            pi_rho=domain.pi_rho,
            lower=tuple(int(v) for v in domain.sites.min(axis=0)),
            upper=tuple(int(v) for v in domain.sites.max(axis=0)),
            is_box=domain.is_box,
        )
        self.logger.bind(**report.model_dump()).debug("domain valid")
        return report

    def cross_split(self, N: int) -> tuple[WiredDomain, WiredDomain]:
        """
        Square V = {1..N-1}^2 and U = its four open quarter squares.

        The sites on the two midlines separate U into four disjoint blocks.
        """
        half = N // 2
        axis = np.arange(1, N)
        gx, gy = np.meshgrid(axis, axis, indexing="ij")
        points = np.stack([gx.ravel(), gy.ravel()], axis=1)
        V = WiredDomain.from_sites(N, points, label=f"square@{N}")
        mask = (V.sites[:, 0] != half) & (V.sites[:, 1] != half)
        U = V.restrict(mask, label=f"cross@{N}")
        return V, U

    def box(self, N: int, width: int, height: int | None = None) -> WiredDomain:
        """width x height block of sites with lower-left corner (1, 1)."""
        height = width if height is None else height
        gx, gy = np.meshgrid(np.arange(1, width + 1), np.arange(1, height + 1), indexing="ij")
        return WiredDomain.from_sites(
            N, np.stack([gx.ravel(), gy.ravel()], axis=1), label=f"box{width}x{height}"
        )

    @staticmethod
    def rows(domain: WiredDomain) -> tuple[list[str], list[tuple]]:
        header = ["ix", "iy", "boundary_edges"]
        data = [
            (int(x), int(y), int(b))
            for (x, y), b in zip(domain.sites, domain.boundary_edge_count)
        ]
        return header, data
