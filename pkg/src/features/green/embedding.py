"""
Diagonal of G^D for large domains by embedding D in its enclosing box B.

With S the outer boundary of D (all inside B), the field on B conditioned to vanish on S is the
field on D, so for x in D

    G^D(x, x) = G^B(x, x) - G^B(x, S) (G^B(S, S))^-1 G^B(S, x).

G^B is exact through the sine transform. Writing G^B(S, S) = C C^T, the correction is the squared
norm of column x of C^-1 G^B(S, D), and row i of that matrix is G^B applied to row i of C^-1
placed on S, so memory stays O(|B|).
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from features.green.backends import SpectralBackend
from features.lattice.models.wired import WiredDomain


def enclosing_box(domain: WiredDomain) -> WiredDomain:
    lo = domain.sites.min(axis=0) - 1
    hi = domain.sites.max(axis=0) + 1
    gx, gy = np.meshgrid(
        np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij"
    )
    return WiredDomain.from_sites(
        domain.N, np.stack([gx.ravel(), gy.ravel()], axis=1), label="enclosing-box"
    )


def embedded_diagonal(domain: WiredDomain, batch: int = 64) -> np.ndarray:
    box = enclosing_box(domain)
    spectral = SpectralBackend.for_domain(box)
    inside = box.indices_of(domain.sites)
    boundary = box.indices_of(domain.outer_boundary)
    m = len(boundary)

    def apply(rows: np.ndarray) -> np.ndarray:
        # rows: (k, m) coefficients on S -> (k, |B|) values of G^B applied to them
        rhs = np.zeros((box.n, rows.shape[0]))
        rhs[boundary, :] = rows.T
        return spectral.solve(rhs).T

    gram = np.empty((m, m))
    for lo in range(0, m, batch):
        unit = np.zeros((min(batch, m - lo), m))
        unit[np.arange(unit.shape[0]), np.arange(lo, lo + unit.shape[0])] = 1.0
        gram[lo : lo + unit.shape[0], :] = apply(unit)[:, boundary]
    gram = 0.5 * (gram + gram.T)

    chol = linalg.cholesky(gram, lower=True)
    inverse_chol = linalg.solve_triangular(chol, np.eye(m), lower=True)

    correction = np.zeros(domain.n)
    for lo in range(0, m, batch):
        block = apply(inverse_chol[lo : lo + batch])[:, inside]
        correction += (block**2).sum(axis=0)

    return spectral.diagonal()[inside] - correction
