"""
StatsService.

The small test kit every verification path shares: two-sample and one-sample Kolmogorov-Smirnov
with the asymptotic Kolmogorov distribution, normal-approximation intervals, and the helpers that
turn a statistic into a Verdict.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from core.errors import TooFewSamples
from core.service import Service
from features.stats.models.sample_set import SampleSet
from features.stats.models.verdict import Verdict

KS_MIN_SAMPLES = 25


def _values(sample: SampleSet | np.ndarray) -> np.ndarray:
    if isinstance(sample, SampleSet):
        return sample.values
    return SampleSet(sample).values


class StatsService(Service):
    @property
    def service_signature(self) -> str:
        return "stats_svc"

    @staticmethod
    def ks_two_sample(a: SampleSet | np.ndarray, b: SampleSet | np.ndarray) -> tuple[float, float]:
        a, b = _values(a), _values(b)
        for sample in (a, b):
            if len(sample) < KS_MIN_SAMPLES:
                raise TooFewSamples(KS_MIN_SAMPLES, len(sample))
        result = stats.ks_2samp(a, b, method="asymp")
        return float(result.statistic), float(result.pvalue)

    @staticmethod
    def ks_normal(a: SampleSet | np.ndarray, variance: float) -> tuple[float, float]:
        """One-sample KS against Normal(0, variance)."""
        a = _values(a)
        if len(a) < KS_MIN_SAMPLES:
            raise TooFewSamples(KS_MIN_SAMPLES, len(a))
        result = stats.kstest(a, stats.norm(scale=np.sqrt(variance)).cdf, method="asymp")
        return float(result.statistic), float(result.pvalue)

    @staticmethod
    def mean_ci(a: SampleSet | np.ndarray, level: float = 0.95) -> tuple[float, float]:
        a = _values(a)
        if len(a) < 2:
            raise TooFewSamples(2, len(a))
        if not 0 < level < 1:
            raise ValueError(f"level must lie in (0, 1), got {level}")
        z = stats.norm.ppf(0.5 + level / 2)
        return float(a.mean()), float(z * a.std(ddof=1) / np.sqrt(len(a)))

    @staticmethod
    def standard_error(a: SampleSet | np.ndarray) -> float:
        a = _values(a)
        if len(a) < 2:
            raise TooFewSamples(2, len(a))
        return float(a.std(ddof=1) / np.sqrt(len(a)))

    @staticmethod
    def skewness(a: SampleSet | np.ndarray) -> float:
        return float(stats.skew(_values(a)))

    @staticmethod
    def within(
        check: str, statistic: str, value: float, target: float, sigma: float, k: float = 4.0
    ) -> Verdict:
        """Pass when |value - target| <= k sigma."""
        return Verdict(
            check=check,
            statistic=statistic,
            value=float(value),
            target=float(target),
            sigma=float(sigma),
            passed=bool(abs(value - target) <= k * sigma),
        )

    @staticmethod
    def p_value(check: str, p: float, alpha: float = 0.01, tests: int = 1) -> Verdict:
        """KS-style verdict; alpha is Bonferroni-corrected across `tests` simultaneous tests."""
        threshold = alpha / max(1, tests)
        return Verdict(
            check=check,
            statistic="ks_p",
            value=float(p),
            target=threshold,
            passed=bool(p > threshold),
        )

    @staticmethod
    def bound(check: str, statistic: str, value: float, limit: float) -> Verdict:
        """Pass when value <= limit."""
        return Verdict(
            check=check,
            statistic=statistic,
            value=float(value),
            target=float(limit),
            passed=bool(value <= limit),
        )

    @staticmethod
    def decreasing(check: str, statistic: str, values: list[float]) -> Verdict:
        steps = np.diff(np.asarray(values, dtype=float))
        return Verdict(
            check=check,
            statistic=statistic,
            value=float(steps.max()) if len(steps) else 0.0,
            target=0.0,
            passed=bool(np.all(steps < 0)),
        )

    @staticmethod
    def in_band(check: str, statistic: str, value: float, lower: float, upper: float) -> Verdict:
        """Pass when lower <= value <= upper; target is the band centre, sigma its half-width."""
        return Verdict(
            check=check,
            statistic=statistic,
            value=float(value),
            target=(lower + upper) / 2,
            sigma=(upper - lower) / 2,
            passed=bool(lower <= value <= upper),
        )
