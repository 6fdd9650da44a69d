from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from features.stats.models.sample_set import SampleSet


@dataclass(frozen=True, eq=False)
class RayKnightDataset:
    """
    Paired samples for one probe f: walk side <f, L_t + (h + sqrt(2 r))^2 / 2> and field side
    <f, (h~ + sqrt(2 (t + r)))^2 / 2>, with r the shift (0 for the plain identity).
    """

    probe: np.ndarray
    walk_side: SampleSet
    field_side: SampleSet
    expected_mean: float


@dataclass(frozen=True, eq=False)
class CltDataset:
    t: float
    standardized: SampleSet
    root: SampleSet
    variance: float
