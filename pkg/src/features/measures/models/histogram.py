from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class LightPointHistogram:
    """
    Light-point values binned per replica and normalized by hatK_N; the first bin is the exact
    zero atom [0, 0]. `sqrt_log_empirical` is the same histogram under the sqrt(log N)/hatK_N
    normalization.
    """

    bin_lo: np.ndarray
    bin_hi: np.ndarray
    empirical: np.ndarray
    sqrt_log_empirical: np.ndarray
    mu_target: np.ndarray
    bound_constant: float
    small_value_eps: np.ndarray
    small_value_mass: np.ndarray
    small_value_slope: float
    small_value_intercept: float

    def rows(self) -> tuple[list[str], list[tuple]]:
        return ["bin_lo", "bin_hi", "empirical", "empirical_sqrt_log", "mu_target"], [
            (float(lo), float(hi), float(e), float(s), float(m))
            for lo, hi, e, s, m in zip(
                self.bin_lo, self.bin_hi, self.empirical, self.sqrt_log_empirical, self.mu_target
            )
        ]
