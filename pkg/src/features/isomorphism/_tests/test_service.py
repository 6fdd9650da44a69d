import math

import numpy as np
import pytest

from core.errors import ContractionViolated
from core.rng import StreamFactory, stream
from features.stats.service import StatsService

kit = StatsService()


def test_first_kac_moment_is_mass_over_pi_rho(iso, greens, lattice):
    green = greens.solve_green(lattice.box(6, 4))
    f = stream(1, "f").random(green.n)

    assert iso.kac_moment(green, f, 1) == pytest.approx(f.sum() / green.domain.pi_rho)


def test_single_site_second_kac_moment(iso, single):
    s = 0.7

    assert iso.kac_moment(single, np.array([s]), 2) == pytest.approx(s**2 / 8, rel=1e-14)


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2, 3])
def test_kac_moments_match_excursions(iso, greens, lattice, n):
    green = greens.solve_green(lattice.box(5, 4))
    f = stream(2, "f").random(green.n)
    count = 1_000_000
    values, _ = iso.walks.local_time_functionals(
        green.domain, None, f, count, StreamFactory(20 + n), "kac"
    )
    powers = values[:, 0] ** n

    assert powers.mean() == pytest.approx(
        iso.kac_moment(green, f, n), abs=3 * kit.standard_error(powers)
    )


def test_exp_moment_of_zero_is_zero(iso, single):
    assert iso.exp_moment(single, np.zeros(1), 3.0) == 0.0


def test_single_site_exp_moment_closed_form(iso, single):
    t, s = 1.0, 1.0

    assert iso.exp_moment(single, np.array([s]), t) == pytest.approx(
        t * s / (1 - s / 4), abs=1e-12
    )
    assert iso.exp_moment(single, np.array([s]), t) == pytest.approx(
        4 * t * (4 / (4 - s) - 1), abs=1e-12
    )


@pytest.mark.slow
def test_single_site_exp_moment_matches_walk(iso, single):
    t, s, replicas = 1.0, 1.0, 1_000_000
    values, _ = iso.walks.local_time_functionals(
        single.domain, t, np.array([s]), replicas, StreamFactory(31), "exp-single"
    )
    weights = np.exp(values[:, 0])
    sigma = kit.standard_error(weights) / weights.mean()

    assert math.log(weights.mean()) == pytest.approx(t * s / (1 - s / 4), abs=3 * sigma)


def test_exp_moment_is_linear_in_t(iso, greens, lattice):
    green = greens.solve_green(lattice.box(6, 4))
    f = 0.1 * stream(3, "f").random(green.n)

    assert iso.exp_moment(green, f, 2.0) == pytest.approx(2 * iso.exp_moment(green, f, 1.0))


def test_contraction_is_enforced(iso, single):
    assert iso.spectral_radius(single, np.array([2.0])) == pytest.approx(0.5)
    with pytest.raises(ContractionViolated):
        iso.exp_moment(single, np.array([4.0]), 1.0)


def test_spectral_radius_matches_dense_eigenvalues(iso, greens, lattice):
    green = greens.solve_green(lattice.box(6, 5))
    f = stream(4, "f").random(green.n) - 0.3
    dense = np.max(np.abs(np.linalg.eigvals(green.matrix() * f[None, :])))

    assert iso.spectral_radius(green, f) == pytest.approx(dense, rel=1e-6)


def test_exp_moment_matches_walk(iso, greens, lattice):
    green = greens.solve_green(lattice.box(5, 4))
    f = 0.2 * stream(5, "f").random(green.n)
    t = 2.0
    values, _ = iso.walks.local_time_functionals(
        green.domain, t, f, 200_000, StreamFactory(5), "exp"
    )
    weights = np.exp(values[:, 0])
    sigma = kit.standard_error(weights) / weights.mean()

    assert math.log(weights.mean()) == pytest.approx(iso.exp_moment(green, f, t), abs=4 * sigma)


@pytest.mark.slow
def test_single_site_ray_knight_in_law(iso, single):
    (dataset,) = iso.ray_knight_datasets(single, 1.0, 100_000, [np.ones(1)], StreamFactory(6))
    _, p = kit.ks_two_sample(dataset.walk_side, dataset.field_side)

    assert p > 0.01
    assert dataset.expected_mean == pytest.approx(1.0 + 0.125)


def test_shifted_ray_knight_in_law(iso, single):
    (dataset,) = iso.ray_knight_datasets(
        single, 0.5, 20_000, [np.ones(1)], StreamFactory(7), shift=1.0
    )

    assert kit.ks_two_sample(dataset.walk_side, dataset.field_side)[1] > 0.01


def test_ray_knight_moments_on_box(iso, greens, lattice):
    green = greens.solve_green(lattice.box(9, 8))
    rng = stream(8, "probes")
    probes = [rng.random(green.n) for _ in range(3)]
    datasets = iso.ray_knight_datasets(green, 1.0, 20_000, probes, StreamFactory(8))

    for data in datasets:
        a, b = data.walk_side.values, data.field_side.values
        se = np.hypot(kit.standard_error(a), kit.standard_error(b))
        assert a.mean() == pytest.approx(b.mean(), abs=4 * se)
        assert a.mean() == pytest.approx(data.expected_mean, abs=4 * kit.standard_error(a))
        a2, b2 = a**2, b**2
        se2 = np.hypot(kit.standard_error(a2), kit.standard_error(b2))
        assert a2.mean() == pytest.approx(b2.mean(), abs=4 * se2)


def test_clt_on_single_site(iso, single):
    datasets = iso.clt_datasets(single, [4.0, 16.0, 64.0], np.ones(1), 10_000, StreamFactory(9))
    last = datasets[-1]

    assert last.variance == pytest.approx(0.25)
    assert kit.ks_normal(last.standardized, last.variance)[1] > 0.01
    assert kit.ks_normal(last.root, last.variance / 2)[1] > 0.01
    skews = [kit.skewness(d.standardized) for d in datasets]
    assert skews[0] > skews[1] > skews[2]


def test_clt_requires_increasing_times(iso, single):
    with pytest.raises(ValueError):
        iso.clt_datasets(single, [4.0, 4.0], np.ones(1), 10, StreamFactory(1))


def test_single_site_escapes_surely(iso, single):
    (row,) = iso.hitting_identity(single, np.array([0]), 1000, StreamFactory(10))

    assert row.escape_prob == 1.0
    assert row.pi_green == pytest.approx(1.0)
    assert row.deviation == pytest.approx(0.0, abs=1e-14)
