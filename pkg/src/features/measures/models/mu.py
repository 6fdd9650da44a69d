"""
The limit value-law of O(1) local times: a unit atom at 0 plus the density
sum_n c^{n+1} l^n / (n! (n+1)!), c = alpha^2 theta / 2, whose Laplace transform is e^{c/s}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from features.potential.constants import alpha

SERIES_TOLERANCE = 1e-14


@dataclass(frozen=True)
class MuMeasure:
    theta: float
    atom_at_zero: float = 1.0

    @property
    def c(self) -> float:
        return alpha**2 * self.theta / 2

    def coefficient(self, n: int) -> float:
        return self.c ** (n + 1) / (math.factorial(n) * math.factorial(n + 1))

    def density(self, ell: float) -> float:
        """Series with terms added until the next one is below 1e-14 of the partial sum."""
        if ell < 0:
            raise ValueError("density is supported on [0, inf)")
        term = self.c
        total = term
        n = 0
        while True:
            term *= self.c * ell / ((n + 1) * (n + 2))
            n += 1
            if term < SERIES_TOLERANCE * total:
                return total
            total += term

    def density_bessel(self, ell: float) -> float:
        """sqrt(c / l) I_1(2 sqrt(c l)), scaled to avoid overflow."""
        if ell == 0:
            return self.c
        z = 2 * math.sqrt(self.c * ell)
        return math.sqrt(self.c / ell) * float(special.ive(1, z)) * math.exp(z)

    def laplace(self, s: float) -> float:
        if s <= 0:
            raise ValueError("Laplace transform needs s > 0")
        return self.atom_at_zero * math.exp(self.c / s)

    def laplace_quadrature(self, s: float) -> float:
        """Atom plus the integral of e^{-s l} against the density, by adaptive quadrature."""
        if s <= 0:
            raise ValueError("Laplace transform needs s > 0")
        c = self.c

        def integrand(ell: float) -> float:
            if ell == 0:
                return c
            z = 2 * math.sqrt(c * ell)
            return math.sqrt(c / ell) * float(special.ive(1, z)) * math.exp(z - s * ell)

        value, _ = integrate.quad(integrand, 0, np.inf, epsabs=0, epsrel=1e-12, limit=400)
        return self.atom_at_zero + value

    def laplace_termwise(self, s: float) -> float:
        """Atom plus sum_n c^{n+1} / ((n+1)! s^{n+1}), the termwise transform of the series."""
        x = self.c / s
        term, total, n = 1.0, self.atom_at_zero, 0
        while True:
            term *= x / (n + 1)
            total += term
            n += 1
            if term < SERIES_TOLERANCE * total:
                return total

    def mass(self, lower: float, upper: float) -> float:
        """mu([lower, upper]); the atom counts when lower <= 0."""
        atom = self.atom_at_zero if lower <= 0 <= upper else 0.0
        return atom + self.continuous_mass(lower, upper)

    def continuous_mass(self, lower: float, upper: float) -> float:
        """Density mass of [lower, upper], atom excluded."""
        lo = max(lower, 0.0)
        if upper <= lo:
            return 0.0
        value, _ = integrate.quad(self.density, lo, upper, epsabs=1e-13, epsrel=1e-12, limit=200)
        return value

    def cdf(self, ell: float) -> float:
        return self.mass(0.0, ell)

    def rows(self, grid: np.ndarray) -> tuple[list[str], list[tuple]]:
        return ["ell", "density", "cdf"], [
            (float(x), self.density(float(x)), self.cdf(float(x))) for x in grid
        ]
