from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from features.lattice.models.wired import WiredDomain


@dataclass(frozen=True, eq=False)
class FieldSample:
    """One DGFF realization over the sites; the value at rho is pinned to 0."""

    domain: WiredDomain
    values: np.ndarray
    seed_tag: str
    rho_value: float = 0.0

    def __post_init__(self):
        if self.values.shape != (self.domain.n,):
            raise ValueError(f"expected {self.domain.n} values, got {self.values.shape}")

    def rows(self) -> tuple[list[str], list[tuple]]:
        return ["ix", "iy", "h"], [
            (int(x), int(y), float(h)) for (x, y), h in zip(self.domain.sites, self.values)
        ]


@dataclass(frozen=True, eq=False)
class BindingField:
    """
    phi^{V,U}: equals h off U and is the harmonic extension of those values into U.
    `in_u` marks the U sites inside V's ordering.
    """

    domain: WiredDomain
    values: np.ndarray
    in_u: np.ndarray

    def harmonic_defect(self) -> float:
        """max over x in U of |phi(x) - mean of phi over the 4 neighbours| (phi = 0 at rho)."""
        padded = np.append(self.values, 0.0)
        means = padded[self.domain.neighbors].mean(axis=1)
        return float(np.max(np.abs(self.values - means)[self.in_u], initial=0.0))
