import numpy as np
import pytest

from core.errors import TooFewSamples
from core.rng import stream
from features.stats.models.sample_set import SampleSet
from features.stats.service import StatsService

kit = StatsService()


def test_identical_samples_have_zero_statistic():
    a = stream(1, "ks").standard_normal(500)

    statistic, p = kit.ks_two_sample(SampleSet(a), SampleSet(a.copy()))

    assert statistic == 0.0
    assert p == pytest.approx(1.0)


def test_shifted_normals_are_rejected():
    rng = stream(2, "ks")
    _, p = kit.ks_two_sample(rng.standard_normal(1000), rng.standard_normal(1000) + 3)

    assert p < 1e-6


def test_same_law_rejection_rate_is_calibrated():
    rng = stream(3, "ks")
    ps = [kit.ks_two_sample(rng.standard_normal(1000), rng.standard_normal(1000))[1] for _ in range(100)]

    assert 0.01 <= np.mean(np.array(ps) < 0.05) <= 0.12


def test_ks_needs_25_samples():
    with pytest.raises(TooFewSamples) as err:
        kit.ks_two_sample(np.zeros(24), np.zeros(100))

    assert err.value.needed == 25
    assert err.value.got == 24


def test_ks_normal_accepts_matching_variance():
    values = stream(4, "norm").normal(scale=0.5, size=5000)

    assert kit.ks_normal(values, 0.25)[1] > 0.01
    assert kit.ks_normal(values, 1.0)[1] < 1e-6


def test_constant_samples_have_zero_halfwidth():
    assert kit.mean_ci(np.full(10, 3.0)) == (3.0, 0.0)


def test_exponential_mean_and_level_monotonicity():
    values = stream(5, "exp").exponential(size=10_000)
    mean, hw95 = kit.mean_ci(values, 0.95)
    _, hw99 = kit.mean_ci(values, 0.99)

    assert abs(mean - 1) < 4 * kit.standard_error(values)
    assert hw99 > hw95


def test_halfwidth_shrinks_with_root_n():
    rng = stream(6, "ci")
    _, small = kit.mean_ci(rng.standard_normal(4000))
    _, large = kit.mean_ci(rng.standard_normal(16000))

    assert large / small == pytest.approx(0.5, rel=0.2)


def test_non_finite_values_are_rejected():
    with pytest.raises(ValueError):
        SampleSet(np.array([1.0, np.nan]))


def test_verdict_helpers():
    assert kit.within("x", "mean", 1.0, 1.1, 0.05, k=3).passed
    assert not kit.within("x", "mean", 1.0, 1.5, 0.05, k=3).passed
    assert kit.p_value("ks", 0.004, tests=1).passed is False
    assert kit.p_value("ks", 0.02, tests=3).row()[-1] == "pass"
    assert kit.decreasing("trend", "gap", [3.0, 2.0, 1.5]).passed
    assert kit.in_band("band", "ratio", 0.9, 0.8, 1.0).passed
