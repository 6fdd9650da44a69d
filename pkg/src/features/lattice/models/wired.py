from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse

RHO = -1

# Neighbor slot order: east, west, north, south.
DIRECTIONS = np.array([(1, 0), (-1, 0), (0, 1), (0, -1)], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class WiredDomain:
    """
    Lattice sites D_N with every edge leaving D_N rerouted to the boundary vertex rho.

    `sites` is an (n, 2) integer array in lexicographic order; `neighbors[i, k]` is the index of
    the site one step in DIRECTIONS[k] from site i, or RHO when that step leaves the domain.
    """

    N: int
    sites: np.ndarray
    neighbors: np.ndarray
    origin: tuple[int, int]
    grid_shape: tuple[int, int]
    label: str = ""
    _grid_index: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return int(self.sites.shape[0])

    @cached_property
    def boundary_edge_count(self) -> np.ndarray:
        return (self.neighbors == RHO).sum(axis=1).astype(np.int64)

    @property
    def pi(self) -> np.ndarray:
        """Degree of every site; always 4 on the wired graph."""
        return np.full(self.n, 4, dtype=np.int64)

    @cached_property
    def pi_rho(self) -> int:
        return int(self.boundary_edge_count.sum())

    @property
    def is_box(self) -> bool:
        return self.n == self.grid_shape[0] * self.grid_shape[1]

    def index_of(self, point: tuple[int, int]) -> int:
        """Site index of a lattice point; -1 when the point is not a site."""
        gx, gy = point[0] - self.origin[0], point[1] - self.origin[1]
        if 0 <= gx < self.grid_shape[0] and 0 <= gy < self.grid_shape[1]:
            return int(self._grid_index[gx, gy])
        return -1

    def indices_of(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
        gx = points[:, 0] - self.origin[0]
        gy = points[:, 1] - self.origin[1]
        inside = (gx >= 0) & (gx < self.grid_shape[0]) & (gy >= 0) & (gy < self.grid_shape[1])
        out = np.full(len(points), -1, dtype=np.int64)
        out[inside] = self._grid_index[gx[inside], gy[inside]]
        return out

    @cached_property
    def entry_sites(self) -> np.ndarray:
        """Each site repeated once per boundary edge; a uniform pick is a uniform boundary edge."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.boundary_edge_count)

    @cached_property
    def exit_slots(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(site index, direction, outside lattice point) for every edge to rho."""
        site_idx, direction = np.nonzero(self.neighbors == RHO)
        points = self.sites[site_idx] + DIRECTIONS[direction]
        return site_idx, direction, points

    @cached_property
    def outer_boundary(self) -> np.ndarray:
        """Distinct lattice points outside the domain adjacent to it, lexicographic."""
        _, _, points = self.exit_slots
        if len(points) == 0:
            return np.empty((0, 2), dtype=np.int64)
        return np.unique(points, axis=0)

    def laplacian(self) -> sparse.csc_matrix:
        """A(x,x) = 4, A(x,y) = -1 for adjacent sites."""
        rows, cols = np.nonzero(self.neighbors != RHO)
        adjacent = self.neighbors[rows, cols]
        n = self.n
        off = sparse.coo_matrix(
            (-np.ones(len(rows)), (rows, adjacent)), shape=(n, n)
        )
        return (4.0 * sparse.identity(n, format="csc") + off).tocsc()

    def grid_values(self, values: np.ndarray, fill: float = np.nan) -> np.ndarray:
        """Scatter per-site values onto the bounding grid (axis 0 = x, axis 1 = y)."""
        grid = np.full(self.grid_shape, fill, dtype=float)
        grid[self.sites[:, 0] - self.origin[0], self.sites[:, 1] - self.origin[1]] = values
        return grid

    def continuum_positions(self) -> np.ndarray:
        return self.sites.astype(float) / self.N

    @classmethod
    def from_sites(cls, N: int, points: np.ndarray, label: str = "") -> WiredDomain:
        """Wire an arbitrary finite site set; sites are re-sorted lexicographically."""
        points = np.unique(np.asarray(points, dtype=np.int64).reshape(-1, 2), axis=0)
        if len(points) == 0:
            origin, shape = (0, 0), (0, 0)
            grid_index = np.empty((0, 0), dtype=np.int64)
            neighbors = np.empty((0, 4), dtype=np.int64)
        else:
            lo = points.min(axis=0)
            hi = points.max(axis=0)
            origin = (int(lo[0]), int(lo[1]))
            shape = (int(hi[0] - lo[0] + 1), int(hi[1] - lo[1] + 1))
            grid_index = np.full(shape, RHO, dtype=np.int64)
            grid_index[points[:, 0] - lo[0], points[:, 1] - lo[1]] = np.arange(len(points))
            padded = np.pad(grid_index, 1, constant_values=RHO)
            gx = points[:, 0] - lo[0] + 1
            gy = points[:, 1] - lo[1] + 1
            neighbors = np.stack(
                [padded[gx + dx, gy + dy] for dx, dy in DIRECTIONS], axis=1
            )
        return cls(
            N=N,
            sites=points,
            neighbors=neighbors,
            origin=origin,
            grid_shape=shape,
            label=label,
            _grid_index=grid_index,
        )

    def restrict(self, mask: np.ndarray, label: str = "") -> WiredDomain:
        """Sub-domain on the sites selected by a boolean mask."""
        return WiredDomain.from_sites(self.N, self.sites[np.asarray(mask, dtype=bool)], label)
