import math

import pytest

from core.errors import BadParameterRange
from features.potential.constants import c0, g


def test_thick_normalization_at_100(measures):
    params = measures.scale_params(100, lam=0.5)

    assert params.K_N == pytest.approx(465.99, abs=5e-3)
    assert params.K_N == pytest.approx(100**1.5 / math.sqrt(math.log(100)), rel=1e-12)
    assert params.c_hat == pytest.approx(math.exp(2 * c0 * 0.25 / g), rel=1e-12)


def test_avoided_normalization_at_100(measures):
    params = measures.scale_params(100, theta=0.3)

    assert params.hatK_N == pytest.approx(630.957, abs=1e-3)
    assert params.hatK_N == pytest.approx(100**1.4, rel=1e-12)
    assert params.t_N == pytest.approx(2 * g * 0.3 * math.log(100) ** 2, rel=1e-14)


def test_max_centering_at_512(measures):
    assert measures.scale_params(512).m_N == pytest.approx(4.4297, abs=1e-4)


@pytest.mark.parametrize("lam", [0.1, 0.3, 0.7])
def test_closed_form_of_k_n(measures, lam):
    N = 256
    params = measures.scale_params(N, lam=lam)

    assert params.K_N * math.sqrt(math.log(N)) / N**2 == pytest.approx(
        math.exp(-2 * lam**2 * math.log(N)), rel=1e-12
    )


def test_overrides_replace_defaults(measures):
    params = measures.scale_params(64, a_N=1.0, t_N=2.0)

    assert params.a_N == 1.0
    assert params.K_N == pytest.approx(64**2 * math.exp(-1 / (2 * g * math.log(64))) / math.sqrt(math.log(64)))
    assert params.hatK_N == pytest.approx(64**2 * math.exp(-2 / (g * math.log(64))))


@pytest.mark.parametrize(
    "kwargs", [dict(N=3, lam=0.5), dict(N=64, lam=1.0), dict(N=64, lam=0.0), dict(N=64, theta=0.0)]
)
def test_bad_parameters(measures, kwargs):
    with pytest.raises(BadParameterRange):
        measures.scale_params(**kwargs)


def test_level_thresholds(measures):
    params = measures.scale_params(64, lam=0.2, theta=0.5)
    upper, lower = measures.level_thresholds(params)
    scale = 2 * g * math.log(64) ** 2

    assert upper == pytest.approx(scale * (math.sqrt(0.5) + 0.2) ** 2)
    assert lower == pytest.approx(scale * (math.sqrt(0.5) - 0.2) ** 2)
    assert lower < params.t_N < upper
