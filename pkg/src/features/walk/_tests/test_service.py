import numpy as np
import pytest
from scipy import stats

from config.settings import settings
from core.errors import StepLimitExceeded
from core.rng import StreamFactory, stream
from features.lattice.models.wired import WiredDomain
from features.walk.models.profile import HoldingMode
from features.walk.service import WalkService

SINGLE = WiredDomain.from_sites(4, np.array([(1, 1)]))
PAIR = WiredDomain.from_sites(4, np.array([(1, 1), (2, 1)]))


def test_single_site_excursion_visits_once(walks):
    record = walks.run_excursion(SINGLE, stream(1, "excursion"))

    assert record.visits.tolist() == [1]
    assert record.steps == 2


def test_expected_visits_per_excursion(walks):
    count = 200_000
    _, visits = walks.excursion_hits(PAIR, count, StreamFactory(3))

    # pi(x) / pi(rho) = 4 / 6 for both sites
    sigma = np.sqrt(count) * 1.5
    assert np.all(np.abs(visits - count * 4 / 6) < 5 * sigma)


def test_zero_time_gives_zero_profile(walks, lattice):
    profile = walks.sample_local_time(lattice.box(8, 5), 0.0, stream(2, "zero"))

    assert profile.n_excursions == 0
    assert not profile.L.any()
    assert len(walks.avoided_set(profile)) == 25


def test_visit_count_mode_is_visits_over_four(walks, lattice):
    profile = walks.sample_local_time(
        lattice.box(8, 4), 2.0, stream(4, "vc"), mode=HoldingMode.VISIT_COUNT
    )

    assert np.array_equal(profile.L, profile.visits / 4)
    assert profile.rho_local_time == 2.0


@pytest.mark.slow
def test_single_site_moment_generating_function(walks):
    replicas = 1_000_000
    _, L, _ = walks.sample_profiles(SINGLE, 1.0, replicas, StreamFactory(5))
    values = np.exp(L[:, 0])

    # E exp(L_1) = exp(t s / (1 - s/4)) at s = t = 1
    se = values.std() / np.sqrt(replicas)
    assert values.mean() == pytest.approx(np.exp(4 / 3), abs=3 * se)


def test_single_site_avoidance_probability(walks):
    replicas = 400_000
    visits, _, counts = walks.sample_profiles(SINGLE, 1.0, replicas, StreamFactory(6))
    p = np.exp(-4.0)
    freq = (visits[:, 0] == 0).mean()

    assert freq == pytest.approx(p, abs=5 * np.sqrt(p * (1 - p) / replicas))
    assert np.array_equal(visits[:, 0], counts)


def test_mean_local_time_equals_t(walks, lattice):
    domain = lattice.box(8, 5)
    replicas, t = 20_000, 1.5
    _, L, _ = walks.sample_profiles(domain, t, replicas, StreamFactory(7))
    se = L.std(axis=0) / np.sqrt(replicas)

    assert np.all(np.abs(L.mean(axis=0) - t) < 5 * se)


def test_excursion_count_is_poisson(walks, lattice):
    domain = lattice.box(8, 4)
    replicas, t = 20_000, 2.0
    _, _, counts = walks.sample_profiles(domain, t, replicas, StreamFactory(8))
    mean = domain.pi_rho * t

    assert counts.mean() == pytest.approx(mean, abs=5 * np.sqrt(mean / replicas))
    assert counts.var() / counts.mean() == pytest.approx(1.0, abs=0.05)


def test_profiles_do_not_depend_on_thread_count(walks, lattice, monkeypatch):
    domain = lattice.box(8, 6)
    monkeypatch.setattr(settings, "chunk_size", 64)

    monkeypatch.setattr(settings, "threads", 1)
    one = walks.sample_profiles(domain, 1.0, 300, StreamFactory(9))
    monkeypatch.setattr(settings, "threads", 4)
    four = walks.sample_profiles(domain, 1.0, 300, StreamFactory(9))

    for a, b in zip(one, four):
        assert np.array_equal(a, b)


def test_excursion_local_time_mean(walks, lattice):
    domain = lattice.box(8, 4)
    replicas = 40_000
    values, counts = walks.local_time_functionals(
        domain, None, np.ones(domain.n), replicas, StreamFactory(10), "exc"
    )

    assert np.all(counts == 1)
    # each site contributes 1 / pi(rho) in expectation
    se = values.std() / np.sqrt(replicas)
    assert values.mean() == pytest.approx(domain.n / domain.pi_rho, abs=5 * se)


@pytest.mark.slow
def test_avoided_count_matches_exact_probabilities(walks, greens, lattice):
    domain = lattice.box(16, 15)
    green = greens.solve_green(domain)
    t = 2 * 0.3 * np.log(16) ** 2 / (2 * np.pi)
    replicas = 10_000
    visits, _, _ = walks.sample_profiles(domain, t, replicas, StreamFactory(11))
    avoided = (visits == 0).sum(axis=1)
    p = walks.avoidance_prob_exact(green, t)

    assert avoided.mean() == pytest.approx(p.sum(), abs=3 * avoided.std() / np.sqrt(replicas))


def test_light_point_bound_dominates_exact_cdf(walks, greens, lattice):
    green = greens.solve_green(lattice.box(12, 9))
    t, b = 1.0, 0.2
    exact = walks.local_time_cdf_exact(green.diagonal(), t, b)

    assert np.all(exact <= walks.light_point_bound(green, t, b) + 1e-12)
    assert np.all(exact >= walks.avoidance_prob_exact(green, t))


def test_exact_law_matches_walk(walks, greens, lattice):
    domain = lattice.box(8, 5)
    green = greens.solve_green(domain)
    centre = domain.index_of((3, 3))
    _, L, _ = walks.sample_profiles(domain, 1.0, 4_000, StreamFactory(12))
    oracle = walks.sample_local_time_exact(
        green.diagonal()[[centre]], 1.0, 4_000, stream(12, "oracle")
    )

    assert stats.ks_2samp(L[:, centre], oracle[:, 0]).pvalue > 1e-3


def test_exact_cdf_matches_oracle_sampler(walks):
    diag = np.array([0.25, 0.6])
    draws = walks.sample_local_time_exact(diag, 1.0, 100_000, stream(13, "oracle"))
    cdf = walks.local_time_cdf_exact(diag, 1.0, 0.5)

    assert np.allclose((draws <= 0.5).mean(axis=0), cdf, atol=0.01)


def test_single_site_cover_time(walks):
    covers = walks.cover_times(SINGLE, 20_000, StreamFactory(14))
    times = np.array([c.t_cover for c in covers])

    assert all(c.n_excursions == 1 for c in covers)
    assert times.mean() == pytest.approx(0.25, abs=5 * 0.25 / np.sqrt(len(times)))


@pytest.mark.slow
def test_cover_time_scale_on_box(walks, lattice):
    N = 32
    domain = lattice.box(N, N - 1)
    covers = walks.cover_times(domain, 200, StreamFactory(15))
    roots = np.sqrt([c.t_cover for c in covers])
    ratio = np.median(roots) / (np.sqrt(2 / (2 * np.pi)) * np.log(N))

    assert 0.7 <= ratio <= 1.2


def test_escape_probability_identity(walks, greens, lattice):
    domain = lattice.box(10, 9)
    green = greens.solve_green(domain)
    rows = walks.hitting_identity(
        green, np.array([domain.index_of((5, 5)), domain.index_of((1, 1))]), 40_000, StreamFactory(16)
    )

    for row in rows:
        assert row.deviation < 4 * row.sigma + 1e-3
        assert abs(row.reversibility_gap) < 4 * row.reversibility_sigma + 1e-3


def test_exit_frequencies_match_harmonic_measure(walks, greens, lattice):
    domain = lattice.box(16, 15)
    green = greens.solve_green(domain)
    start = domain.index_of((8, 8))
    trials = 100_000
    counts = walks.exit_frequencies(domain, start, trials, stream(17, "exit"))
    H = greens.harmonic_measure(green, np.array([start])).row(0)

    assert counts.sum() == trials
    sigma = np.sqrt(H * (1 - H) / trials)
    assert np.all(np.abs(counts / trials - H) <= 4 * sigma + 1e-4)


def test_step_guard_raises(lattice):
    with pytest.raises(StepLimitExceeded):
        WalkService(step_limit=5).sample_local_time(lattice.box(32, 20), 5.0, stream(18, "guard"))
