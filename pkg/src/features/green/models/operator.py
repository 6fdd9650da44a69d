from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from config.settings import settings
from features.lattice.models.wired import WiredDomain


@dataclass(eq=False)
class GreenOperator:
    """
    G = A^-1 for a wired domain, answered by back-solves against one factorization.

    Queries are logically read-only; the diagonal is computed once and cached.
    """

    domain: WiredDomain
    backend: object
    diagonal_method: str
    _diag: np.ndarray | None = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def n(self) -> int:
        return self.domain.n

    def solve(self, b: np.ndarray) -> np.ndarray:
        """A^-1 b for a vector or an (n, k) block."""
        return self.backend.solve(np.asarray(b, dtype=float))

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.solve(v)

    def column(self, z: int) -> np.ndarray:
        e = np.zeros(self.n)
        e[z] = 1.0
        return self.solve(e)

    def columns(self, indices: np.ndarray, batch: Optional[int] = None) -> np.ndarray:
        """G(., z) for each z, as an (n, k) array, solved settings.solve_batch columns at a time."""
        batch = batch or settings.solve_batch
        indices = np.asarray(indices, dtype=np.int64)
        out = np.empty((self.n, len(indices)))
        for lo in range(0, len(indices), batch):
            chunk = indices[lo : lo + batch]
            rhs = np.zeros((self.n, len(chunk)))
            rhs[chunk, np.arange(len(chunk))] = 1.0
            out[:, lo : lo + len(chunk)] = self.solve(rhs)
        return out

    def entry(self, x: int, y: int) -> float:
        return float(self.column(y)[x])

    def matrix(self) -> np.ndarray:
        """Dense G; only for small domains."""
        full = self.columns(np.arange(self.n))
        return 0.5 * (full + full.T)

    def diagonal(self) -> np.ndarray:
        with self._lock:
            if self._diag is None:
                self._diag = self._compute_diagonal()
            return self._diag

    def _compute_diagonal(self) -> np.ndarray:
        direct = self.backend.diagonal()
        if direct is not None:
            return np.asarray(direct)
        if self.diagonal_method == "embedding":
            from features.green.embedding import embedded_diagonal

            return embedded_diagonal(self.domain, settings.solve_batch)
        cols = np.empty(self.n)
        batch = settings.solve_batch
        for lo in range(0, self.n, batch):
            idx = np.arange(lo, min(lo + batch, self.n))
            rhs = np.zeros((self.n, len(idx)))
            rhs[idx, np.arange(len(idx))] = 1.0
            cols[idx] = self.solve(rhs)[idx, np.arange(len(idx))]
        return cols

    def quadratic_form(self, f: np.ndarray) -> float:
        """<f, G f>."""
        f = np.asarray(f, dtype=float)
        return float(f @ self.solve(f))


@dataclass(frozen=True, eq=False)
class HarmonicMeasureTable:
    """
    H(x, slot): probability that the walk from source x leaves the domain through exit slot
    (site, direction). `points` holds the outside lattice point of each slot.
    """

    sources: np.ndarray
    slot_sites: np.ndarray
    slot_directions: np.ndarray
    points: np.ndarray
    values: np.ndarray

    def row(self, i: int) -> np.ndarray:
        return self.values[i]

    def by_point(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Row i aggregated over slots sharing an outside point."""
        unique, inverse = np.unique(self.points, axis=0, return_inverse=True)
        mass = np.zeros(len(unique))
        np.add.at(mass, inverse.reshape(-1), self.values[i])
        return unique, mass
