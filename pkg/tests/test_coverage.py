import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d2cover.coverage import SANDWICH_TOL, coverage_cost, sandwich_check, wkmeans_cost
from d2cover.density import DensityField, normalize, reference_density, polygon_moments
from d2cover.discretization import build_cells
from d2cover.geometry import ConvexPolygon, voronoi_partition
from oracles import riemann_coverage

FIXED_SENSORS = np.array(
    [
        [0.12, 0.18],
        [0.31, 0.22],
        [0.22, 0.41],
        [0.55, 0.15],
        [0.83, 0.27],
        [0.47, 0.52],
        [0.71, 0.66],
        [0.86, 0.81],
        [0.63, 0.88],
        [0.18, 0.79],
    ]
)


def test_single_sensor_at_centre(unit_square):
    assert coverage_cost([(0.5, 0.5)], DensityField.uniform(), unit_square) == pytest.approx(1 / 6, rel=1e-12)


def test_single_sensor_at_corner(unit_square):
    assert coverage_cost([(0.0, 0.0)], DensityField.uniform(), unit_square) == pytest.approx(2 / 3, rel=1e-12)


def test_fixed_configuration_against_riemann(unit_square, field):
    H = coverage_cost(FIXED_SENSORS, field, unit_square)
    assert H == pytest.approx(riemann_coverage(FIXED_SENSORS, field, n=2000), abs=1e-5)


def test_wkmeans_zero_when_all_candidates_are_sites(cells_01):
    pts, w = cells_01.candidates
    assert wkmeans_cost(pts, cells_01) == 0.0


def test_wkmeans_two_points():
    assert wkmeans_cost([(0.5, 0.0)], [(0, 0), (1, 0)], [1.0, 1.0]) == pytest.approx(0.5)


def test_wkmeans_against_double_loop(cells_01, rng):
    pts, w = cells_01.candidates
    P = rng.random((10, 2))
    naive = 0.0
    for x, wi in zip(pts, w):
        best = min((x[0] - p[0]) ** 2 + (x[1] - p[1]) ** 2 for p in P)
        naive += wi * best
    assert wkmeans_cost(P, pts, w) == pytest.approx(naive, abs=1e-12)


def test_sandwich_equality_single_sensor(unit_square, field, cells_01):
    rep = sandwich_check([(0.4, 0.6)], field, unit_square, cells_01)
    assert rep.ok
    assert abs(rep.gap) < 1e-9


def test_sandwich_equality_uniform_halves(unit_square):
    f = DensityField.uniform()
    cells = build_cells(unit_square, 0.5, f)
    rep = sandwich_check([(0.25, 0.5), (0.75, 0.5)], f, unit_square, cells)
    assert rep.ok
    assert abs(rep.gap) < 1e-9


@pytest.mark.parametrize("eps", [0.1, 0.05])
def test_sandwich_random_configurations(unit_square, field, eps, rng):
    cells = build_cells(unit_square, eps, field)
    for _ in range(20):
        rep = sandwich_check(rng.random((10, 2)), field, unit_square, cells)
        assert rep.sandwich_lhs_ok and rep.sandwich_rhs_ok


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.integers(1, 15), st.sampled_from([0.1, 0.2, 0.25]))
def test_gap_within_band(seed, k, eps):
    Q = ConvexPolygon.unit_square()
    f = normalize(reference_density(), Q)
    cells = build_cells(Q, eps, f)
    rep = sandwich_check(np.random.default_rng(seed).random((k, 2)), f, Q, cells)
    assert -SANDWICH_TOL <= rep.gap <= rep.slack + SANDWICH_TOL


@given(st.permutations(range(10)))
def test_permutation_invariance(perm):
    Q = ConvexPolygon.unit_square()
    f = normalize(reference_density(), Q)
    a = coverage_cost(FIXED_SENSORS, f, Q)
    b = coverage_cost(FIXED_SENSORS[list(perm)], f, Q)
    assert b == pytest.approx(a, rel=1e-12)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 1.0))
def test_moving_toward_centroid_lowers_cost(seed, t):
    Q = ConvexPolygon.unit_square()
    f = normalize(reference_density(), Q)
    P = np.random.default_rng(seed).random((6, 2))
    part = voronoi_partition(P, Q)
    i = seed % 6
    m = polygon_moments(f, part.cells[i])
    if np.linalg.norm(m.centroid - P[i]) < 1e-6:
        return
    moved = P.copy()
    moved[i] = P[i] + t * (m.centroid - P[i])
    # fixed-partition cost of cell i: w |c - p|^2 + J
    before = m.weight * np.sum((m.centroid - P[i]) ** 2) + m.inertia_about(m.centroid)
    after = m.weight * np.sum((m.centroid - moved[i]) ** 2) + m.inertia_about(m.centroid)
    assert after < before
    assert m.inertia_about(moved[i]) == pytest.approx(after, abs=1e-10)
    # re-partitioning can only help further
    assert coverage_cost(moved, f, Q) <= coverage_cost(P, f, Q) + 1e-12
