from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from features.lattice.models.wired import WiredDomain


class HoldingMode(str, Enum):
    EXPONENTIAL = "exponential-holding"
    VISIT_COUNT = "visit-count"


@dataclass(frozen=True, eq=False)
class ExcursionRecord:
    visits: np.ndarray
    steps: int


@dataclass(frozen=True, eq=False)
class LocalTimeProfile:
    """
    Local time L_t over the sites at the moment the local time at rho reaches t.
    L(x) is occupation time divided by pi(x) = 4.
    """

    domain: WiredDomain
    t: float
    L: np.ndarray
    visits: np.ndarray
    n_excursions: int
    mode: HoldingMode = HoldingMode.EXPONENTIAL
    seed_tag: str = ""

    @property
    def rho_local_time(self) -> float:
        return self.t

    def rows(self) -> tuple[list[str], list[tuple]]:
        return ["ix", "iy", "visits", "L"], [
            (int(x), int(y), int(v), float(l))
            for (x, y), v, l in zip(self.domain.sites, self.visits, self.L)
        ]


@dataclass(frozen=True)
class CoverTime:
    t_cover: float
    natural_steps: int
    n_excursions: int
