"""
Factorization backends for the wired Dirichlet Laplacian A.

Each backend answers three questions exactly: solve(B) = A^-1 B, sample(Z) with Cov = A^-1 when
Z has independent standard normal entries, and (where cheap) the diagonal of A^-1.
"""

from __future__ import annotations

import importlib
from types import ModuleType
from typing import Optional

import numpy as np
from scipy import fft, linalg, sparse
from scipy.sparse.linalg import splu

from core.errors import FactorizationFailure
from features.lattice.models.wired import WiredDomain


def import_optional(name: str) -> Optional[ModuleType]:
    try:
        return importlib.import_module(name)
    except ImportError:
        return None


class DenseBackend:
    name = "dense"

    def __init__(self, A: sparse.spmatrix):
        try:
            self._chol = linalg.cholesky(A.toarray(), lower=True)
        except linalg.LinAlgError as exc:
            raise FactorizationFailure(f"dense Cholesky failed: {exc}") from exc

    def solve(self, B: np.ndarray) -> np.ndarray:
        return linalg.cho_solve((self._chol, True), B)

    def sample(self, Z: np.ndarray) -> np.ndarray:
        return linalg.solve_triangular(self._chol, Z, lower=True, trans="T")

    def diagonal(self) -> np.ndarray:
        inverse_factor = linalg.solve_triangular(
            self._chol, np.eye(self._chol.shape[0]), lower=True
        )
        return (inverse_factor**2).sum(axis=0)


class SparseBackend:
    """
    CHOLMOD when scikit-sparse is importable, otherwise SuperLU run without pivoting under a
    symmetric fill-reducing ordering: then Q A Q^T = L D L^T with U = D L^T, and
    A^-1 Q^T L D^1/2 z has covariance A^-1.
    """

    def __init__(self, A: sparse.spmatrix, prefer_cholmod: bool = True):
        A = sparse.csc_matrix(A)
        cholmod = import_optional("sksparse.cholmod") if prefer_cholmod else None
        if cholmod is not None:
            self.name = "cholmod"
            try:
                self._factor = cholmod.cholesky(A)
            except Exception as exc:
                raise FactorizationFailure(f"cholmod failed: {exc}") from exc
            return

        self.name = "superlu"
        try:
            self._lu = splu(
                A,
                permc_spec="MMD_AT_PLUS_A",
                diag_pivot_thresh=0.0,
                options={"SymmetricMode": True},
            )
        except RuntimeError as exc:
            raise FactorizationFailure(f"splu failed: {exc}") from exc
        if not np.array_equal(self._lu.perm_r, self._lu.perm_c):
            raise FactorizationFailure("splu pivoted off the diagonal; install scikit-sparse")
        d = self._lu.U.diagonal()
        if np.any(d <= 0):
            raise FactorizationFailure("non-positive pivot: matrix is not SPD")
        self._sqrt_d = np.sqrt(d)
        self._L = self._lu.L.tocsr()
        self._perm = self._lu.perm_r

    def solve(self, B: np.ndarray) -> np.ndarray:
        if self.name == "cholmod":
            return self._factor(B)
        return self._lu.solve(np.asarray(B, dtype=float))

    def sample(self, Z: np.ndarray) -> np.ndarray:
        if self.name == "cholmod":
            return self._factor.apply_Pt(
                self._factor.solve_Lt(Z, use_LDLt_decomposition=False)
            )
        scaled = Z * (self._sqrt_d if Z.ndim == 1 else self._sqrt_d[:, None])
        return self._lu.solve(np.asarray(self._L @ scaled)[self._perm])

    def diagonal(self) -> None:
        return None


class SpectralBackend:
    """
    Exact diagonalization of A on a full L1 x L2 box by the type-I discrete sine transform:
    A = S diag(lambda) S with lambda(k) = 4 - 2 cos(pi k1/(L1+1)) - 2 cos(pi k2/(L2+1)).
    """

    name = "spectral"

    def __init__(self, shape: tuple[int, int]):
        self.shape = shape
        L1, L2 = shape
        k1 = np.arange(1, L1 + 1)
        k2 = np.arange(1, L2 + 1)
        self._lam = (
            4.0
            - 2.0 * np.cos(np.pi * k1 / (L1 + 1))[:, None]
            - 2.0 * np.cos(np.pi * k2 / (L2 + 1))[None, :]
        )

    @classmethod
    def for_domain(cls, domain: WiredDomain) -> SpectralBackend:
        if not domain.is_box:
            raise FactorizationFailure("spectral backend needs a full rectangular box")
        return cls(domain.grid_shape)

    def _grid(self, v: np.ndarray) -> np.ndarray:
        return v.reshape(*self.shape, *v.shape[1:])

    def _transform(self, grid: np.ndarray) -> np.ndarray:
        return fft.dstn(grid, type=1, axes=(0, 1), norm="ortho")

    def _weights(self, power: float, ndim: int) -> np.ndarray:
        w = self._lam**power
        return w.reshape(w.shape + (1,) * (ndim - 2))

    def solve(self, B: np.ndarray) -> np.ndarray:
        B = np.asarray(B, dtype=float)
        grid = self._grid(B)
        out = self._transform(self._transform(grid) * self._weights(-1.0, grid.ndim))
        return out.reshape(B.shape)

    def sample(self, Z: np.ndarray) -> np.ndarray:
        grid = self._grid(np.asarray(Z, dtype=float))
        return self._transform(grid * self._weights(-0.5, grid.ndim)).reshape(Z.shape)

    def diagonal(self) -> np.ndarray:
        L1, L2 = self.shape
        s1 = np.sin(np.pi * np.outer(np.arange(1, L1 + 1), np.arange(1, L1 + 1)) / (L1 + 1))
        s2 = np.sin(np.pi * np.outer(np.arange(1, L2 + 1), np.arange(1, L2 + 1)) / (L2 + 1))
        s1sq = (2.0 / (L1 + 1)) * s1**2
        s2sq = (2.0 / (L2 + 1)) * s2**2
        return (s1sq.T @ (1.0 / self._lam) @ s2sq).ravel()
