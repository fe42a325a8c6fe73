from math import exp

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d2cover.density import (
    DensityField,
    GaussianTerm,
    batch_moments,
    compound_rule,
    evaluate,
    integrate,
    normalize,
    reference_density,
    polygon_moments,
)
from d2cover.geometry import ConvexPolygon
from oracles import midpoint_grid, mixture_rect_integral, riemann_moments

PUBLISHED_A = 0.610882


def random_convex(rng, n=7, scale=0.3):
    """Convex polygon from sorted random angles around a random centre."""
    c = 0.3 + 0.4 * rng.random(2)
    ang = np.sort(rng.random(n) * 2 * np.pi)
    r = scale * (0.5 + 0.5 * rng.random(n))
    pts = c + np.column_stack([r * np.cos(ang), r * np.sin(ang)])
    from scipy.spatial import ConvexHull

    return ConvexPolygon(pts[ConvexHull(pts).vertices])


# -- evaluation --------------------------------------------------------------


def test_uniform_field_is_one_everywhere():
    f = DensityField.uniform()
    assert evaluate(f, (0.1, 0.9)) == 1.0
    assert np.all(f(np.random.default_rng(0).random((50, 2))) == 1.0)


def test_printed_formula_at_upper_centre():
    f = DensityField(reference_density(printed=True).terms, normalization=PUBLISHED_A, normalized=True)
    expected = (1.0 / PUBLISHED_A) * (1.0 + exp(-20 * 0.25 - 2 * 0.25))
    assert evaluate(f, (0.75, 0.75)) == pytest.approx(expected, rel=1e-14)


def test_single_term_symmetry():
    f = DensityField([GaussianTerm(2.0, 0.4, 0.6, 7.0, 3.0)])
    assert evaluate(f, (0.4 + 0.13, 0.6 - 0.2)) == pytest.approx(evaluate(f, (0.4 - 0.13, 0.6 + 0.2)), rel=1e-15)


def test_field_is_nonnegative(field, rng):
    assert np.all(field(rng.random((1000, 2)) * 3 - 1) >= 0)


def test_roundtrip_dicts():
    f = reference_density()
    assert DensityField.from_dicts(f.to_dicts()).to_dicts() == f.to_dicts()


# -- normalization -----------------------------------------------------------


def test_normalization_constant_matches_published(unit_square):
    f = normalize(reference_density(), unit_square)
    assert f.normalization == pytest.approx(PUBLISHED_A, rel=1e-4)
    assert integrate(f, unit_square) == pytest.approx(1.0, abs=1e-6)


def test_normalization_against_erf_oracle(unit_square):
    for printed in (False, True):
        raw = reference_density(printed=printed)
        f = normalize(raw, unit_square)
        assert f.normalization == pytest.approx(mixture_rect_integral(raw.terms, 0, 0, 1, 1), rel=1e-12)


def test_printed_terms_give_a_different_constant(unit_square):
    f = normalize(reference_density(printed=True), unit_square)
    assert f.normalization == pytest.approx(0.673431, rel=1e-5)


def test_uniform_amplitude_five(unit_square):
    assert normalize(DensityField.uniform(5.0), unit_square).normalization == pytest.approx(5.0, rel=1e-14)


def test_single_gaussian_against_riemann(unit_square):
    raw = DensityField([GaussianTerm(1.0, 0.5, 0.5, 10.0, 10.0)])
    q, da = midpoint_grid(2000)
    oracle = raw(q).sum() * da
    assert normalize(raw, unit_square).normalization == pytest.approx(oracle, abs=1e-6)


def test_zero_mass_field_rejected(unit_square):
    with pytest.raises(ValueError):
        normalize(DensityField.uniform(0.0), unit_square)


@pytest.mark.parametrize("depth", [0, 2])
def test_compound_rule_integrates_quintics_exactly(depth):
    from math import factorial

    bary, weights = compound_rule(depth)
    # barycentric onto (0,0),(1,0),(0,1); weights are normalised to unit area
    x, y = bary[:, 1], bary[:, 2]
    for a in range(6):
        for b in range(6 - a):
            exact = factorial(a) * factorial(b) / factorial(a + b + 2)
            approx = 0.5 * np.sum(weights * x**a * y**b)
            assert approx == pytest.approx(exact, rel=1e-12)


# -- polygon moments ---------------------------------------------------------


def test_uniform_unit_square_moments(unit_square):
    m = polygon_moments(DensityField.uniform(), unit_square)
    assert m.weight == pytest.approx(1.0)
    assert np.allclose(m.centroid, (0.5, 0.5))
    assert m.inertia_about((0.5, 0.5)) == pytest.approx(1 / 6, rel=1e-12)


def test_uniform_half_cell_moments():
    m = polygon_moments(DensityField.uniform(), ConvexPolygon.rectangle(0, 0, 0.5, 0.5))
    assert m.weight == pytest.approx(0.25)
    assert m.inertia_about((0.25, 0.25)) == pytest.approx(0.25 * 0.5**2 / 6, rel=1e-12)


def test_reference_cell_against_riemann(field):
    m = polygon_moments(field, ConvexPolygon.rectangle(0.2, 0.2, 0.3, 0.3))
    w, c, j = riemann_moments(field, 0.2, 0.2, 0.3, 0.3, n=1000)
    assert m.weight == pytest.approx(w, abs=1e-7)
    assert np.allclose(m.centroid, c, atol=1e-7)
    assert m.inertia_about(m.centroid) == pytest.approx(j, abs=1e-7)


def test_weight_against_erf_on_larger_cell(field):
    m = polygon_moments(field, ConvexPolygon.rectangle(0.6, 0.1, 0.95, 0.45))
    exact = mixture_rect_integral(field.terms, 0.6, 0.1, 0.95, 0.45) / field.normalization
    assert m.weight == pytest.approx(exact, rel=1e-8)


def test_massless_polygon_falls_back_to_geometric_centroid():
    poly = ConvexPolygon.rectangle(0, 0, 0.2, 0.1)
    m = polygon_moments(DensityField.uniform(0.0), poly)
    assert m.weight == 0.0
    assert np.allclose(m.first_moment, 0.0)
    assert np.allclose(m.centroid, (0.1, 0.05))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_parallel_axis_identity(seed):
    rng = np.random.default_rng(seed)
    field = normalize(reference_density(), ConvexPolygon.unit_square())
    poly = random_convex(rng)
    p = rng.random(2) * 2 - 0.5
    m = polygon_moments(field, poly)
    lhs = m.inertia_about(p)
    rhs = m.weight * np.sum((m.centroid - p) ** 2) + m.inertia_about(m.centroid)
    assert lhs == pytest.approx(rhs, abs=1e-8)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_additivity_over_triangulation(seed):
    rng = np.random.default_rng(seed)
    field = normalize(reference_density(), ConvexPolygon.unit_square())
    poly = random_convex(rng, scale=0.15)
    v = poly.vertices
    tris = [ConvexPolygon([v[0], v[i], v[i + 1]]) for i in range(1, len(v) - 1)]
    whole = polygon_moments(field, poly)
    parts = [polygon_moments(field, t) for t in tris]
    ref = np.array([0.5, 0.5])
    assert whole.weight == pytest.approx(sum(p.weight for p in parts), abs=1e-9)
    assert np.allclose(whole.first_moment, sum(p.first_moment for p in parts), atol=1e-9)
    assert whole.inertia_about(ref) == pytest.approx(sum(p.inertia_about(ref) for p in parts), abs=1e-9)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_translation_equivariance(seed):
    rng = np.random.default_rng(seed)
    poly = random_convex(rng)
    shift = rng.random(2) * 4 - 2
    base = reference_density()
    moved = DensityField(
        [GaussianTerm(t.amplitude, t.cx + shift[0], t.cy + shift[1], t.ax, t.ay) for t in base.terms]
    )
    m0 = polygon_moments(base, poly)
    m1 = polygon_moments(moved, ConvexPolygon(poly.vertices + shift))
    assert np.allclose(m1.centroid, m0.centroid + shift, atol=1e-10)


def test_batch_matches_single(field, rng):
    polys = [random_convex(rng, scale=0.1) for _ in range(6)]
    refs = rng.random((6, 2))
    w, c, j = batch_moments(field, polys, refs)
    for i, poly in enumerate(polys):
        m = polygon_moments(field, poly)
        assert w[i] == pytest.approx(m.weight, rel=1e-12)
        assert np.allclose(c[i], m.centroid, atol=1e-13)
        assert j[i] == pytest.approx(m.inertia_about(refs[i]), rel=1e-10)
