"""Square-grid partition of the domain into weighted candidate cells."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DEFAULT_DEPTH, batch_moments
from .geometry import ConvexPolygon, clip_to_domain, polygon_area_centroid

# cells lighter than this stay in the tiling but are never sampled
MIN_CANDIDATE_WEIGHT = 1e-15


@dataclass(frozen=True)
class CellPartition:
    """Grid cells with weight ``w_i``, mass centroid ``x_i`` and inertia ``J_i``
    about that centroid."""

    polygons: tuple
    weights: np.ndarray
    centroids: np.ndarray
    inertia: np.ndarray
    epsilon: float

    def __len__(self):
        return len(self.polygons)

    @property
    def candidate_mask(self):
        return self.weights >= MIN_CANDIDATE_WEIGHT

    @property
    def candidates(self):
        """``(points, weights)`` of the cells eligible for sampling."""
        m = self.candidate_mask
        return self.centroids[m], self.weights[m]

    @property
    def inertia_sum(self) -> float:
        return float(self.inertia.sum())


def grid_polygons(domain: ConvexPolygon, epsilon: float):
    """Squares of side ``epsilon`` anchored at the domain's bounding-box corner,
    clipped to the domain, empty pieces dropped."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    x0, y0, x1, y1 = domain.bounds
    # guard against ceil(1.0000000000000002) for exact multiples
    nx = max(1, math.ceil((x1 - x0) / epsilon - 1e-9))
    ny = max(1, math.ceil((y1 - y0) / epsilon - 1e-9))
    polys = []
    for j in range(ny):
        for i in range(nx):
            sq = ConvexPolygon.rectangle(
                x0 + i * epsilon,
                y0 + j * epsilon,
                min(x0 + (i + 1) * epsilon, x1),
                min(y0 + (j + 1) * epsilon, y1),
            )
            piece = clip_to_domain(sq, domain)
            if piece is not None:
                polys.append(piece)
    return polys


def build_cells(domain: ConvexPolygon, epsilon: float, field, depth=DEFAULT_DEPTH) -> CellPartition:
    """Grid the domain and compute per-cell weight, centroid and central inertia."""
    polys = grid_polygons(domain, epsilon)
    # two passes: centroids first, then the inertia about them
    geo = np.array([polygon_area_centroid(p)[1] for p in polys])
    weights, centroids, _ = batch_moments(field, polys, geo, depth)
    _, _, inertia = batch_moments(field, polys, centroids, depth)
    return CellPartition(tuple(polys), weights, centroids, inertia, float(epsilon))
