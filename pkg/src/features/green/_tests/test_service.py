import numpy as np
import pytest

from features.green.backends import DenseBackend, SparseBackend, SpectralBackend
from features.green.embedding import embedded_diagonal
from features.lattice.models.continuum import Disc, unit_disc, unit_square
from features.lattice.models.wired import WiredDomain
from features.potential.constants import c0, g


def test_single_site_green_is_quarter(greens):
    domain = WiredDomain.from_sites(4, np.array([(1, 1)]))
    green = greens.solve_green(domain)

    assert green.entry(0, 0) == pytest.approx(0.25, abs=1e-15)
    assert green.diagonal()[0] == pytest.approx(0.25, abs=1e-15)


def test_two_sites_match_hand_inverse(greens):
    domain = WiredDomain.from_sites(4, np.array([(1, 1), (2, 1)]))
    green = greens.solve_green(domain)

    assert np.allclose(green.matrix(), np.array([[4, 1], [1, 4]]) / 15, atol=1e-14)


@pytest.mark.parametrize("backend_cls", [DenseBackend, SparseBackend])
def test_factor_backends_agree_with_spectral(lattice, backend_cls):
    domain = lattice.box(8, 6, 5)
    spectral = SpectralBackend.for_domain(domain)
    other = backend_cls(domain.laplacian())
    eye = np.eye(domain.n)

    assert np.allclose(other.solve(eye), spectral.solve(eye), atol=1e-12)


@pytest.mark.parametrize(
    "make", [DenseBackend, SparseBackend, lambda A: SpectralBackend((6, 5))]
)
def test_sampling_transform_has_covariance_g(lattice, make):
    domain = lattice.box(8, 6, 5)
    backend = make(domain.laplacian())
    transform = backend.sample(np.eye(domain.n))
    G = np.linalg.inv(domain.laplacian().toarray())

    assert np.allclose(transform @ transform.T, G, atol=1e-12)


def test_spectral_diagonal_is_exact(lattice):
    domain = lattice.box(8, 7, 4)
    G = np.linalg.inv(domain.laplacian().toarray())

    assert np.allclose(SpectralBackend.for_domain(domain).diagonal(), np.diag(G), atol=1e-13)


def test_embedded_diagonal_on_disc(lattice):
    domain = lattice.discretize(unit_disc(), 10)
    G = np.linalg.inv(domain.laplacian().toarray())

    assert np.allclose(embedded_diagonal(domain, batch=7), np.diag(G), atol=1e-10)


def test_green_is_symmetric(greens, lattice):
    green = greens.solve_green(lattice.discretize(unit_disc(), 8))
    M = green.columns(np.arange(green.n))

    assert np.allclose(M, M.T, rtol=1e-10, atol=0)


@pytest.mark.parametrize("width", [5, 9])
def test_green_via_kernel_matches_solve(greens, lattice, width):
    domain = lattice.box(width + 1, width)
    green = greens.solve_green(domain)
    rows = greens.green_via_kernel_rows(green, np.arange(domain.n))

    assert np.max(np.abs(rows - green.matrix())) <= 1e-9


def test_green_via_kernel_single_site(greens):
    green = greens.solve_green(WiredDomain.from_sites(4, np.array([(0, 0)])))

    assert greens.green_via_kernel(green, 0, 0) == pytest.approx(0.25, abs=1e-10)


def test_green_via_kernel_irregular_domain(greens, lattice):
    domain = lattice.discretize(unit_disc(), 7)
    green = greens.solve_green(domain)
    rows = greens.green_via_kernel_rows(green, np.array([0, domain.n // 2]))

    assert np.allclose(rows, green.matrix()[[0, domain.n // 2]], atol=1e-9)


def test_harmonic_measure_single_site(greens):
    green = greens.solve_green(WiredDomain.from_sites(4, np.array([(0, 0)])))
    table = greens.harmonic_measure(green, np.array([0]))

    assert np.allclose(table.values[0], 0.25, atol=1e-15)
    assert len(table.points) == 4


def test_harmonic_measure_rows_sum_to_one(greens, lattice):
    domain = lattice.discretize(unit_disc(), 12)
    green = greens.solve_green(domain)
    table = greens.harmonic_measure(green, np.arange(0, domain.n, 7))

    assert np.all(table.values >= 0)
    assert np.allclose(table.values.sum(axis=1), 1.0, atol=1e-12)


def test_harmonic_measure_dihedral_invariance_at_center(greens, lattice):
    domain = lattice.box(8, 7)
    green = greens.solve_green(domain)
    center = domain.index_of((4, 4))
    points, mass = greens.harmonic_measure(green, np.array([center])).by_point(0)
    lookup = {tuple(p): m for p, m in zip(points, mass)}

    for (x, y), m in lookup.items():
        dx, dy = x - 4, y - 4
        for ix, iy in [(dy, dx), (-dx, dy), (dx, -dy), (-dy, -dx)]:
            assert lookup[(ix + 4, iy + 4)] == pytest.approx(m, abs=1e-14)


def test_upper_bound_constant_below_two(greens, lattice):
    for N in (16, 32, 64):
        green = greens.solve_green(lattice.discretize(unit_square(), N))
        assert greens.upper_bound_constant(green, max_sources=64) < 2.0


def test_domain_monotonicity(greens, lattice):
    small = lattice.box(8, 7)
    grown = WiredDomain.from_sites(
        8, np.vstack([small.sites, [(8, 4), (0, 4), (4, 8)]])
    )
    a = greens.solve_green(small).diagonal()[small.index_of((4, 4))]
    b = greens.solve_green(grown).diagonal()[grown.index_of((4, 4))]

    assert b >= a


def test_disc_center_diagonal_gap_shrinks(greens, lattice):
    gaps = []
    for N in (16, 32, 64):
        domain = lattice.discretize(unit_disc(), N)
        green = greens.solve_green(domain)
        center = domain.index_of((0, 0))
        gaps.append(abs(green.entry(center, center) - g * np.log(N) - c0))

    assert gaps[0] > gaps[1] > gaps[2]


@pytest.mark.slow
def test_disc_center_diagonal_gap_shrinks_at_scale(greens, lattice):
    gaps = []
    for N in (32, 64, 128, 256):
        domain = lattice.discretize(unit_disc(), N)
        green = greens.solve_green(domain, method="sparse")
        center = domain.index_of((0, 0))
        gaps.append(abs(green.entry(center, center) - g * np.log(N) - c0))

    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_conformal_radius_disc_center(greens):
    assert greens.conformal_radius(unit_disc(), 64, (0.0, 0.0)) == pytest.approx(1.0, abs=0.05)


def test_conformal_radius_disc_off_center(greens):
    r32 = greens.conformal_radius(unit_disc(), 32, (0.5, 0.0))
    r64 = greens.conformal_radius(unit_disc(), 64, (0.5, 0.0))

    assert abs(r64 - 0.75) < 0.05
    assert abs(r64 - 0.75) <= abs(r32 - 0.75) + 1e-3


def test_conformal_radius_square_refines(greens):
    a = greens.conformal_radius(unit_square(), 64, (0.5, 0.5))
    b = greens.conformal_radius(unit_square(), 128, (0.5, 0.5))

    assert abs(a / b - 1) < 0.02


def test_conformal_radius_field_matches_harmonic_route(greens, lattice):
    domain = lattice.discretize(unit_disc(), 32)
    green = greens.solve_green(domain)
    field = greens.conformal_radius_field(green)
    direct = greens.conformal_radius(unit_disc(), 32, (0.0, 0.0))

    assert field[domain.index_of((0, 0))] == pytest.approx(direct, rel=1e-3)


def test_conformal_radius_rejects_boundary_points(greens):
    from core.errors import PointTooCloseToBoundary

    with pytest.raises(PointTooCloseToBoundary):
        greens.conformal_radius(unit_disc(), 16, (0.95, 0.0))


def test_continuum_green_quadrature_matches_closed_form(greens):
    rng = np.random.default_rng(3)
    for _ in range(20):
        r = np.sqrt(rng.uniform(0, 0.8, 2))
        phi = rng.uniform(0, 2 * np.pi, 2)
        x = (r[0] * np.cos(phi[0]), r[0] * np.sin(phi[0]))
        y = (r[1] * np.cos(phi[1]), r[1] * np.sin(phi[1]))
        a = greens.continuum_green_disc(x, y)
        assert a == pytest.approx(greens.continuum_green_disc(y, x), abs=1e-8)
        assert a == pytest.approx(greens.disc_green_closed_form(x, y), abs=1e-8)


def test_continuum_green_from_center(greens):
    assert greens.continuum_green_disc((0.0, 0.0), (0.5, 0.0)) == pytest.approx(
        -g * np.log(0.5), abs=1e-10
    )


def test_coincident_points_rejected(greens):
    from core.errors import CoincidentPoints

    with pytest.raises(CoincidentPoints):
        greens.continuum_green_disc((0.1, 0.1), (0.1, 0.1))


def test_discrete_green_converges_to_continuum(greens, lattice):
    x, y = (0.2, 0.1), (-0.3, 0.25)
    target = greens.disc_green_closed_form(x, y)
    gaps = []
    for N in (16, 64):
        domain = lattice.discretize(Disc(), N)
        green = greens.solve_green(domain)
        i = domain.index_of(tuple(np.floor(np.array(x) * N).astype(int)))
        j = domain.index_of(tuple(np.floor(np.array(y) * N).astype(int)))
        gaps.append(abs(green.entry(i, j) - target))

    assert gaps[1] < gaps[0]


def test_solves_are_batched_by_settings(greens, lattice, monkeypatch):
    from config.settings import settings

    domain = lattice.discretize(unit_disc(), 8)
    reference = greens.solve_green(domain, method="dense").matrix()

    monkeypatch.setattr(settings, "solve_batch", 3)
    green = greens.solve_green(domain, method="sparse")
    widths = []
    solve = green.backend.solve

    def recording(rhs):
        widths.append(1 if rhs.ndim == 1 else rhs.shape[1])
        return solve(rhs)

    monkeypatch.setattr(green.backend, "solve", recording)

    assert np.allclose(green.columns(np.arange(7)), reference[:, :7], atol=1e-12)
    assert widths == [3, 3, 1]

    widths.clear()
    assert np.allclose(green.diagonal(), np.diag(reference), atol=1e-12)
    assert max(widths) == 3
    assert sum(widths) == domain.n
