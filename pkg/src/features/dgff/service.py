"""
DgffService.

Exact DGFF sampling through the Laplacian factor shared with GreenService, and the Gibbs-Markov
decomposition h^V = h^U + phi^{V,U}.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from config.settings import settings
from core.errors import NotASubdomain
from core.pool import map_ordered
from core.rng import StreamFactory, chunk_bounds
from core.service import Service
from features.dgff.models.field import BindingField, FieldSample
from features.green.models.operator import GreenOperator
from features.green.service import GreenService
from features.lattice.models.wired import DIRECTIONS, WiredDomain


class DgffService(Service):
    def __init__(self, greens: GreenService | None = None):
        super().__init__()
        self.greens = greens or GreenService()

    @property
    def service_signature(self) -> str:
        return "dgff_svc"

    def sample_field(
        self, green: GreenOperator, rng: np.random.Generator, seed_tag: str = ""
    ) -> FieldSample:
        z = rng.standard_normal(green.n)
        return FieldSample(domain=green.domain, values=green.backend.sample(z), seed_tag=seed_tag)

    def sample_fields(
        self,
        green: GreenOperator,
        count: int,
        streams: StreamFactory,
        purpose: str = "dgff",
        threads: int | None = None,
    ) -> np.ndarray:
        """(count, n) independent draws; chunk c uses stream (purpose, c)."""
        chunks = chunk_bounds(count, settings.chunk_size)

        def draw(bounds: tuple[int, int]) -> np.ndarray:
            lo, hi = bounds
            rng = streams(purpose, replica=lo // settings.chunk_size)
            z = rng.standard_normal((green.n, hi - lo))
            return green.backend.sample(z).T

        with self.stage("sample_fields", n=green.n, count=count):
            blocks = map_ordered(draw, chunks, threads)
        if not blocks:
            return np.empty((0, green.n))
        return np.vstack(blocks)

    @staticmethod
    def _embed(V: WiredDomain, U: WiredDomain) -> np.ndarray:
        positions = V.indices_of(U.sites)
        if np.any(positions < 0):
            raise NotASubdomain(f"{int(np.sum(positions < 0))} sites of U lie outside V")
        return positions

    def _coupling(self, V: WiredDomain, U: WiredDomain, positions: np.ndarray) -> sparse.csr_matrix:
        """B[x, y] = 1 when y in V \\ U is a neighbour of x in U."""
        in_u = np.zeros(V.n, dtype=bool)
        in_u[positions] = True
        rows, cols = [], []
        for step in DIRECTIONS:
            targets = V.indices_of(U.sites + step)
            keep = (targets >= 0) & ~in_u[np.maximum(targets, 0)]
            rows.append(np.flatnonzero(keep))
            cols.append(targets[keep])
        rows_a, cols_a = np.concatenate(rows), np.concatenate(cols)
        return sparse.csr_matrix(
            (np.ones(len(rows_a)), (rows_a, cols_a)), shape=(U.n, V.n)
        )

    def gibbs_markov_split(
        self,
        V: WiredDomain,
        U: WiredDomain,
        h: FieldSample,
        green_u: GreenOperator | None = None,
    ) -> tuple[BindingField, FieldSample]:
        positions = self._embed(V, U)
        green_u = green_u or self.greens.solve_green(U)
        phi_u = green_u.solve(self._coupling(V, U, positions) @ h.values)

        phi = h.values.copy()
        phi[positions] = phi_u
        in_u = np.zeros(V.n, dtype=bool)
        in_u[positions] = True

        residual = FieldSample(
            domain=U, values=h.values[positions] - phi_u, seed_tag=f"{h.seed_tag}|residual"
        )
        return BindingField(domain=V, values=phi, in_u=in_u), residual

    def split_many(
        self, V: WiredDomain, U: WiredDomain, H: np.ndarray, green_u: GreenOperator
    ) -> tuple[np.ndarray, np.ndarray]:
        """Row-wise split of a (k, n_V) block: returns (phi on V, residual on U)."""
        positions = self._embed(V, U)
        phi_u = green_u.solve(self._coupling(V, U, positions) @ H.T).T
        phi = H.copy()
        phi[:, positions] = phi_u
        return phi, H[:, positions] - phi_u

    def binding_operator(
        self, V: WiredDomain, U: WiredDomain, green_u: GreenOperator | None = None
    ) -> np.ndarray:
        """Dense E with phi = E h."""
        positions = self._embed(V, U)
        green_u = green_u or self.greens.solve_green(U)
        E = np.eye(V.n)
        E[positions, :] = green_u.solve(self._coupling(V, U, positions).toarray())
        return E

    def binding_covariance(
        self, green_v: GreenOperator, green_u: GreenOperator
    ) -> dict[str, np.ndarray]:
        """
        Exact covariances implied by G^V and the extension operator, restricted to U:
        residual (should equal G^U), binding (should equal G^V - G^U) and G^U itself.
        """
        V, U = green_v.domain, green_u.domain
        positions = self._embed(V, U)
        E = self.binding_operator(V, U, green_u)
        G_v = green_v.matrix()
        R = np.eye(V.n) - E
        residual = (R @ G_v @ R.T)[np.ix_(positions, positions)]
        binding = (E @ G_v @ E.T)[np.ix_(positions, positions)]
        return {
            "residual": residual,
            "binding": binding,
            "green_u": green_u.matrix(),
            "green_v_on_u": G_v[np.ix_(positions, positions)],
        }

    @staticmethod
    def coarse_field_gx(green: GreenOperator, x: int) -> np.ndarray:
        """g_x(y) = G(x, y) / G(x, x)."""
        column = green.column(x)
        return column / column[x]

    @staticmethod
    def maxima(samples: np.ndarray) -> np.ndarray:
        return samples.max(axis=1)
