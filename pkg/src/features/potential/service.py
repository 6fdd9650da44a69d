"""
PotentialKernel.

The potential kernel a of the simple random walk on Z^2, normalized by a(0) = 0 and
sum_{y~x} [a(y) - a(x)] = delta_0(x). Inside the cutoff radius values come from quadrature of

    a(p, q) = 1/(2 pi) * int_0^pi [1 - cos(p u) exp(-q t(u))] / sinh t(u) du,  cosh t = 2 - cos u,

which is the Fourier double integral with one variable integrated out in closed form. Outside the
cutoff the asymptotic g log|x| + c0 is returned.
"""

from __future__ import annotations

import threading
from typing import Iterable

import numpy as np
from scipy import integrate

from config.settings import settings
from core.service import Service
from features.potential.constants import c0, g

Orbit = tuple[int, int]


def canonical(x: Iterable[int]) -> Orbit:
    """Representative of the dihedral orbit of x: (min |x_i|, max |x_i|)."""
    a, b = (abs(int(v)) for v in x)
    return (a, b) if a <= b else (b, a)


def _integrand(u: float, p: int, q: int) -> float:
    eps = 2.0 * np.sin(0.5 * u) ** 2
    root = np.sqrt(eps * (eps + 2.0))
    t = np.log1p(eps + root)
    decay = np.exp(-q * t)
    numerator = -np.expm1(-q * t) + decay * 2.0 * np.sin(0.5 * p * u) ** 2
    return numerator / root


def kernel_quadrature(p: int, q: int) -> float:
    if p == 0 and q == 0:
        return 0.0
    value, _ = integrate.quad(
        _integrand, 0.0, np.pi, args=(p, q), epsabs=1e-14, epsrel=1e-13, limit=800
    )
    return value / (2.0 * np.pi)


def kernel_asymptotic(x: Iterable[int]) -> float:
    a, b = x
    return g * np.log(np.hypot(a, b)) + c0


class PotentialKernel(Service):
    def __init__(self, cutoff_radius: float | None = None):
        super().__init__()
        self.cutoff_radius = (
            settings.kernel_cutoff_radius if cutoff_radius is None else cutoff_radius
        )
        self.g = g
        self.c0 = c0
        self._cache: dict[Orbit, float] = {(0, 0): 0.0}
        self._lock = threading.Lock()

    @property
    def service_signature(self) -> str:
        return "potential_svc"

    def __call__(self, x: Iterable[int]) -> float:
        return self.eval_kernel(x)

    def eval_kernel(self, x: Iterable[int]) -> float:
        key = canonical(x)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached

        if np.hypot(*key) <= self.cutoff_radius:
            value = kernel_quadrature(*key)
        else:
            value = kernel_asymptotic(key)

        with self._lock:
            self._cache.setdefault(key, value)
        return value

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.int64).reshape(-1, 2)
        lo = np.minimum(np.abs(points[:, 0]), np.abs(points[:, 1]))
        hi = np.maximum(np.abs(points[:, 0]), np.abs(points[:, 1]))
        keys, inverse = np.unique(np.stack([lo, hi], axis=1), axis=0, return_inverse=True)
        values = np.array([self.eval_kernel(k) for k in keys])
        return values[inverse.reshape(-1)]

    def precompute(self, radius: int) -> int:
        """Fill the cache for |x|_inf <= radius ahead of parallel sections."""
        for p in range(radius + 1):
            for q in range(p, radius + 1):
                self.eval_kernel((p, q))
        return len(self._cache)

    def check_harmonicity(self, window_radius: int) -> float:
        """max over |x|_inf <= R of |sum_{y~x} [a(y) - a(x)] - delta_0(x)|."""
        if window_radius < 1:
            raise ValueError("window_radius must be at least 1")
        worst = 0.0
        for x1 in range(-window_radius, window_radius + 1):
            for x2 in range(-window_radius, window_radius + 1):
                # the residual is dihedral invariant
                if not (0 <= x1 <= x2):
                    continue
                centre = self.eval_kernel((x1, x2))
                laplacian = sum(
                    self.eval_kernel((x1 + dx, x2 + dy)) - centre
                    for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
                )
                delta = 1.0 if (x1, x2) == (0, 0) else 0.0
                worst = max(worst, abs(laplacian - delta))
        self.logger.bind(window=window_radius, residual=worst).debug("harmonicity checked")
        return worst

    def asymptotic_gap(self, x: Iterable[int]) -> float:
        """
        a(x) - g log|x| - c0; O(|x|^-2). Evaluated by quadrature at every radius: past the
        cutoff the kernel itself is the asymptotic form.
        """
        key = canonical(x)
        if np.hypot(*key) <= self.cutoff_radius:
            exact = self.eval_kernel(key)
        else:
            exact = kernel_quadrature(*key)
        return exact - kernel_asymptotic(key)

    def rows(self, radius: int) -> tuple[list[str], list[tuple]]:
        header = ["ix", "iy", "a"]
        data = [
            (x1, x2, self.eval_kernel((x1, x2)))
            for x1 in range(-radius, radius + 1)
            for x2 in range(-radius, radius + 1)
        ]
        return header, data
