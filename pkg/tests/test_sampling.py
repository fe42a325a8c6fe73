import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d2cover.density import normalize, reference_density
from d2cover.discretization import build_cells
from d2cover.geometry import ConvexPolygon
from d2cover.sampling import (
    DegenerateDistributionError,
    InsufficientCandidatesError,
    RngStream,
    d2_seed_indices,
    uniform_sample,
    weighted_d2_sample,
)


def test_single_candidate(rng):
    assert d2_seed_indices([[0.3, 0.4]], [1.0], 1, rng).tolist() == [0]


def test_k_equals_candidate_count(cells_01, rng):
    pts, w = cells_01.candidates
    idx = d2_seed_indices(pts, w, len(pts), rng)
    assert sorted(idx.tolist()) == list(range(len(pts)))


def test_second_pick_follows_d2_law():
    x = np.array([[0.0, 0.0], [0.5, 0.0], [1.0, 0.0]])
    w = np.array([0.5, 0.25, 0.25])
    rng = np.random.default_rng(11)
    second = []
    while len(second) < 100_000:
        i, j = d2_seed_indices(x, w, 2, rng)
        if i == 0:  # condition on the first pick landing on x=0
            second.append(j)
    freq = np.bincount(second, minlength=3) / len(second)
    assert np.allclose(freq, [0.0, 0.2, 0.8], atol=0.01)


def test_first_pick_marginals(unit_square):
    field = normalize(reference_density(), unit_square)
    cells = build_cells(unit_square, 0.25, field)
    pts, w = cells.candidates
    rng = RngStream(3, 0).generator()
    n = 100_000
    firsts = np.array([d2_seed_indices(pts, w, 1, rng)[0] for _ in range(n)])
    freq = np.bincount(firsts, minlength=len(w)) / n
    sigma = np.sqrt(w * (1 - w) / n)
    assert np.all(np.abs(freq - w) <= 3 * sigma)


def test_insufficient_candidates(rng):
    with pytest.raises(InsufficientCandidatesError):
        d2_seed_indices([[0, 0], [1, 1]], [1.0, 0.0], 2, rng)


def test_degenerate_distribution(rng):
    with pytest.raises(DegenerateDistributionError):
        d2_seed_indices([[0.2, 0.2], [0.2, 0.2]], [1.0, 1.0], 2, rng)


@settings(max_examples=30)
@given(st.integers(0, 2**63), st.integers(1, 30))
def test_no_duplicates_and_support(seed, k):
    field = normalize(reference_density(), ConvexPolygon.unit_square())
    cells = _cells(field)
    pts, w = cells.candidates
    P = weighted_d2_sample(cells, k, RngStream(seed).generator())
    assert len({tuple(p) for p in P}) == k
    for p in P:
        hit = np.flatnonzero(np.all(pts == p, axis=1))
        assert len(hit) == 1 and w[hit[0]] > 0


_CACHE = {}


def _cells(field):
    if "c" not in _CACHE:
        _CACHE["c"] = build_cells(ConvexPolygon.unit_square(), 0.1, field)
    return _CACHE["c"]


@given(st.integers(0, 2**64 - 1), st.integers(0, 1000))
def test_weighted_d2_is_deterministic(seed, stream):
    field = normalize(reference_density(), ConvexPolygon.unit_square())
    cells = _cells(field)
    a = weighted_d2_sample(cells, 10, RngStream(seed, stream).generator())
    b = weighted_d2_sample(cells, 10, RngStream(seed, stream).generator())
    assert np.array_equal(a, b)


def test_uniform_mean(unit_square):
    rng = RngStream(5).generator()
    pts = np.vstack([uniform_sample(unit_square, 1, rng) for _ in range(100_000)])
    assert np.allclose(pts.mean(axis=0), 0.5, atol=0.005)


def test_uniform_points_inside(rng):
    tri = ConvexPolygon([(0, 0), (1, 0), (0, 1)])
    P = uniform_sample(tri, 5, rng)
    assert P.shape == (5, 2)
    assert np.all(tri.contains(P))


def test_uniform_deterministic(unit_square):
    a = uniform_sample(unit_square, 7, RngStream(9, 2).generator())
    b = uniform_sample(unit_square, 7, RngStream(9, 2).generator())
    assert np.array_equal(a, b)


def test_streams_differ():
    a = RngStream(1, 0).generator().random(4)
    b = RngStream(1, 1).generator().random(4)
    c = RngStream(2, 0).generator().random(4)
    assert not np.array_equal(a, b) and not np.array_equal(a, c)
    assert RngStream(1, 0).trial_seed() == RngStream(1, 0).trial_seed()
