from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np


class PointKind(str, Enum):
    THICK = "thick"
    AVOIDED = "avoided"
    LIGHT = "light"
    LT_THICK = "lt_thick"
    LT_THIN = "lt_thin"


@dataclass(frozen=True, eq=False)
class PointMeasure:
    """Atoms (x/N, value), each carrying `weight`; `normalization` labels how weight was chosen."""

    positions: np.ndarray
    values: np.ndarray
    weight: float
    kind: PointKind
    normalization: str = ""

    def __len__(self) -> int:
        return len(self.values)

    def restrict(self, lower: Optional[float] = None, upper: Optional[float] = None) -> PointMeasure:
        keep = np.ones(len(self.values), dtype=bool)
        if lower is not None:
            keep &= self.values >= lower
        if upper is not None:
            keep &= self.values <= upper
        return replace(self, positions=self.positions[keep], values=self.values[keep])

    def total_mass(self, lower: Optional[float] = None) -> float:
        return len(self.restrict(lower)) * self.weight

    def rescaled(self, factor: float, normalization: str) -> PointMeasure:
        return replace(self, weight=self.weight * factor, normalization=normalization)

    def rows(self) -> tuple[list[str], list[tuple]]:
        return ["x", "y", "value", "weight"], [
            (float(x), float(y), float(v), self.weight)
            for (x, y), v in zip(self.positions, self.values)
        ]
