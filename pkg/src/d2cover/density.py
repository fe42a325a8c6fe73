"""Density fields and moment integrals over convex polygons.

A density is anything callable on an ``(N, 2)`` array of points returning
``N`` nonnegative values. :class:`DensityField` is the Gaussian-mixture
implementation used throughout; integration never looks inside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .geometry import ConvexPolygon, polygon_area_centroid

# Subdivision depth of the compound triangle rule. Each level splits every
# triangle into four.
DEFAULT_DEPTH = 2
# Finer depth used for whole-domain integrals (normalisation).
NORMALIZE_DEPTH = 4
# Fan triangles with a longer edge than this get extra subdivision levels, so
# large cells (few sensors) keep the same accuracy as small ones.
REFINE_EDGE = 0.35


@dataclass(frozen=True)
class GaussianTerm:
    """``amplitude * exp(-ax (x-cx)^2 - ay (y-cy)^2)``."""

    amplitude: float
    cx: float
    cy: float
    ax: float
    ay: float

    def __post_init__(self):
        if self.amplitude < 0 or self.ax < 0 or self.ay < 0:
            raise ValueError("amplitude and axis coefficients must be nonnegative")

    def __call__(self, points):
        p = np.asarray(points, dtype=float)
        dx = p[..., 0] - self.cx
        dy = p[..., 1] - self.cy
        return self.amplitude * np.exp(-self.ax * dx * dx - self.ay * dy * dy)

    def to_dict(self):
        return {"amplitude": self.amplitude, "cx": self.cx, "cy": self.cy, "ax": self.ax, "ay": self.ay}


@dataclass(frozen=True)
class DensityField:
    """Sum of Gaussian terms divided by ``normalization``.

    A freshly built field is *raw* (``normalization == 1`` and ``normalized``
    false); :func:`normalize` returns the unit-mass version.
    """

    terms: tuple
    normalization: float = 1.0
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("a density needs at least one term")
        if not self.normalization > 0:
            raise ValueError("normalization constant must be positive")

    @classmethod
    def from_dicts(cls, specs):
        return cls(tuple(GaussianTerm(**{k: float(v) for k, v in s.items()}) for s in specs))

    @classmethod
    def uniform(cls, amplitude=1.0):
        return cls((GaussianTerm(amplitude, 0.0, 0.0, 0.0, 0.0),))

    def __call__(self, points):
        p = np.asarray(points, dtype=float)
        total = self.terms[0](p)
        for term in self.terms[1:]:
            total = total + term(p)
        return total / self.normalization

    def to_dicts(self):
        return [t.to_dict() for t in self.terms]


def reference_density(printed=False) -> DensityField:
    """Raw two-Gaussian field on the unit square used by the experiments.

    By default the second term has ``ay = 5``: that is the field whose unit-square
    mass is 0.610882 and whose Lloyd optima match the published coverage
    values. ``printed=True`` gives the variant with ``ay = 2`` (mass 0.673431).
    """
    return DensityField(
        (
            GaussianTerm(1.0, 0.75, 0.75, 10.0, 2.0),
            GaussianTerm(1.0, 0.25, 0.25, 20.0, 2.0 if printed else 5.0),
        )
    )


def evaluate(field, q) -> float:
    """Density value at a single point."""
    return float(np.asarray(field(np.asarray(q, dtype=float).reshape(1, 2)))[0])


# -- quadrature ---------------------------------------------------------------

_S15 = math.sqrt(15.0)
_A1 = (6.0 - _S15) / 21.0
_A2 = (6.0 + _S15) / 21.0
_W1 = (155.0 - _S15) / 1200.0
_W2 = (155.0 + _S15) / 1200.0
# symmetric 7-point rule, exact for degree 5; barycentric nodes, weights sum to 1
_BARY7 = np.array(
    [
        [1 / 3, 1 / 3, 1 / 3],
        [_A1, _A1, 1 - 2 * _A1],
        [_A1, 1 - 2 * _A1, _A1],
        [1 - 2 * _A1, _A1, _A1],
        [_A2, _A2, 1 - 2 * _A2],
        [_A2, 1 - 2 * _A2, _A2],
        [1 - 2 * _A2, _A2, _A2],
    ]
)
_WEIGHTS7 = np.array([9 / 40, _W1, _W1, _W1, _W2, _W2, _W2])


@lru_cache(maxsize=None)
def compound_rule(depth: int):
    """Barycentric nodes ``(M, 3)`` and weights ``(M,)`` of the 7-point rule
    applied on ``4**depth`` congruent sub-triangles of the reference triangle."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    tris = [np.eye(3)]
    for _ in range(depth):
        nxt = []
        for t in tris:
            a, b, c = t
            ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
            nxt += [np.array(x) for x in ((a, ab, ca), (ab, b, bc), (ca, bc, c), (bc, ca, ab))]
        tris = nxt
    sub = np.array(tris)  # (T, 3 corners, 3 bary)
    nodes = np.einsum("qc,tcb->tqb", _BARY7, sub).reshape(-1, 3)
    weights = np.tile(_WEIGHTS7, len(tris)) / len(tris)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def fan_triangles(poly: ConvexPolygon):
    """Triangles ``(m, 3, 2)`` fanning out from the geometric centroid."""
    _, c = polygon_area_centroid(poly)
    v = poly.vertices
    out = np.empty((len(v), 3, 2))
    out[:, 0] = c
    out[:, 1] = v
    out[:-1, 2] = v[1:]
    out[-1, 2] = v[0]
    return out


def triangle_nodes(tris, depth=DEFAULT_DEPTH):
    """Quadrature nodes ``(T, M, 2)`` and weights ``(T, M)`` (area included)."""
    bary, wts = compound_rule(depth)
    tris = np.asarray(tris, dtype=float)
    pts = np.matmul(bary, tris)
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    area = 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    return pts, area[:, None] * wts[None, :]


def extra_levels(tris, base=REFINE_EDGE):
    """Additional subdivision levels per triangle from its longest edge."""
    tris = np.asarray(tris, dtype=float)
    e = np.stack([tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 1], tris[:, 0] - tris[:, 2]], axis=1)
    longest = np.sqrt((e * e).sum(axis=2)).max(axis=1)
    with np.errstate(divide="ignore"):
        lv = np.ceil(np.log2(np.maximum(longest, 1e-300) / base))
    return np.maximum(lv, 0).astype(int)


def refined_nodes(tris, depth=DEFAULT_DEPTH):
    """Flat quadrature nodes ``(M, 2)``, weights ``(M,)`` and the index of the
    triangle each node belongs to, with per-triangle refinement."""
    tris = np.asarray(tris, dtype=float)
    levels = depth + extra_levels(tris)
    if np.all(levels == levels[0]):
        pts, wts = triangle_nodes(tris, int(levels[0]))
        idx = np.repeat(np.arange(len(tris)), wts.shape[1])
        return pts.reshape(-1, 2), wts.reshape(-1), idx
    pts_all, wts_all, idx_all = [], [], []
    for lv in np.unique(levels):
        sel = np.flatnonzero(levels == lv)
        pts, wts = triangle_nodes(tris[sel], int(lv))
        pts_all.append(pts.reshape(-1, 2))
        wts_all.append(wts.reshape(-1))
        idx_all.append(np.repeat(sel, wts.shape[1]))
    return np.concatenate(pts_all), np.concatenate(wts_all), np.concatenate(idx_all)


@dataclass(frozen=True)
class PolygonMoments:
    """Density moments of one polygon.

    Keeps the quadrature nodes and density-weighted quadrature weights so that
    the second moment about any reference point can be evaluated afterwards.
    """

    weight: float
    first_moment: np.ndarray
    fallback_centroid: np.ndarray
    nodes: np.ndarray
    masses: np.ndarray

    @property
    def centroid(self) -> np.ndarray:
        """Mass centroid; the geometric centroid for massless polygons."""
        if self.weight > 0:
            return self.first_moment / self.weight
        return self.fallback_centroid

    def inertia_about(self, ref) -> float:
        d = self.nodes - np.asarray(ref, dtype=float)
        return float(self.masses @ (d * d).sum(axis=1))


def polygon_moments(field, poly: ConvexPolygon, depth=DEFAULT_DEPTH) -> PolygonMoments:
    """Weight, first moment and a second-moment evaluator of ``field`` over ``poly``."""
    pts, wts, _ = refined_nodes(fan_triangles(poly), depth)
    masses = wts * field(pts)
    weight = float(masses.sum())
    first = masses @ pts if weight > 0 else np.zeros(2)
    _, geo = polygon_area_centroid(poly)
    return PolygonMoments(weight, np.asarray(first, dtype=float), geo, pts, masses)


def batch_moments(field, polys, refs, depth=DEFAULT_DEPTH):
    """Moments of many polygons in one vectorised pass.

    Returns ``(weights, centroids, inertia)`` where ``inertia[i]`` is the second
    moment of polygon ``i`` about ``refs[i]``. Centroids of massless polygons
    fall back to the geometric centroid.
    """
    refs = np.asarray(refs, dtype=float).reshape(-1, 2)
    n = len(polys)
    tris = []
    owner = []
    geo = np.empty((n, 2))
    for i, poly in enumerate(polys):
        t = fan_triangles(poly)
        tris.append(t)
        owner.append(np.full(len(t), i))
        geo[i] = t[0, 0]
    tris = np.concatenate(tris)
    owner = np.concatenate(owner)
    pts, wts, tri = refined_nodes(tris, depth)
    node_owner = owner[tri]
    masses = wts * field(pts)
    rel = pts - refs[node_owner]
    weights = np.bincount(node_owner, masses, minlength=n)
    m1 = np.stack([np.bincount(node_owner, masses * rel[:, d], minlength=n) for d in (0, 1)], axis=1)
    inertia = np.bincount(node_owner, masses * (rel * rel).sum(axis=1), minlength=n)
    centroids = geo.copy()
    pos = weights > 0
    centroids[pos] = refs[pos] + m1[pos] / weights[pos, None]
    return weights, centroids, inertia


def integrate(field, poly: ConvexPolygon, depth=DEFAULT_DEPTH) -> float:
    """Integral of ``field`` over ``poly``."""
    pts, wts, _ = refined_nodes(fan_triangles(poly), depth)
    return float(wts @ field(pts))


def normalize(field: DensityField, domain: ConvexPolygon, depth=NORMALIZE_DEPTH) -> DensityField:
    """Return ``field`` rescaled to unit mass over ``domain``."""
    raw = replace(field, normalization=1.0, normalized=False)
    mass = integrate(raw, domain, depth)
    if not mass > 0:
        raise ValueError("density has zero mass over the domain")
    return replace(field, normalization=mass, normalized=True)
