"""Coverage cost H, weighted k-means cost Phi, and the sandwich bound relating them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DEFAULT_DEPTH, batch_moments
from .discretization import CellPartition
from .geometry import ConvexPolygon, max_neighbor_distance, voronoi_partition

SANDWICH_TOL = 1e-7


def cell_costs(sites, field, domain: ConvexPolygon, depth=DEFAULT_DEPTH, partition=None):
    """Per-sensor ``(weights, centroids, inertia about the sensor)`` of the
    Voronoi cells, plus the partition itself."""
    sites = np.asarray(sites, dtype=float).reshape(-1, 2)
    if partition is None:
        partition = voronoi_partition(sites, domain)
    w, c, j = batch_moments(field, partition.cells, sites, depth)
    return w, c, j, partition


def coverage_cost(sites, field, domain: ConvexPolygon, depth=DEFAULT_DEPTH) -> float:
    """``H(P)``: density-weighted squared distance to the nearest sensor."""
    _, _, j, _ = cell_costs(sites, field, domain, depth)
    return float(j.sum())


def wkmeans_cost(sites, points, weights=None) -> float:
    """``Phi(P) = sum_i w_i min_p |x_i - p|^2``.

    ``points`` may be a :class:`CellPartition`, in which case its candidate
    centroids and weights are used.
    """
    if isinstance(points, CellPartition):
        points, weights = points.centroids, points.weights
    x = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    p = np.asarray(sites, dtype=float).reshape(-1, x.shape[1])
    d2 = ((x[:, None, :] - p[None, :, :]) ** 2).sum(axis=2).min(axis=1)
    return float(w @ d2)


@dataclass(frozen=True)
class CoverageReport:
    H: float
    Phi: float
    inertia_sum: float
    D: float
    epsilon: float
    sandwich_lhs_ok: bool
    sandwich_rhs_ok: bool

    @property
    def gap(self) -> float:
        """``Phi + sum J - H``; lies in ``[0, 2 sqrt(2) D eps]``."""
        return self.Phi + self.inertia_sum - self.H

    @property
    def slack(self) -> float:
        return 2.0 * math.sqrt(2.0) * self.D * self.epsilon

    @property
    def ok(self) -> bool:
        return self.sandwich_lhs_ok and self.sandwich_rhs_ok


def sandwich_check(sites, field, domain: ConvexPolygon, cells: CellPartition, tol=SANDWICH_TOL, depth=DEFAULT_DEPTH):
    """Evaluate ``H <= Phi + sum J <= H + 2 sqrt(2) D eps`` for one configuration."""
    _, _, j, part = cell_costs(sites, field, domain, depth)
    H = float(j.sum())
    phi = wkmeans_cost(sites, cells)
    jsum = cells.inertia_sum
    D = max_neighbor_distance(part, sites)
    eps = cells.epsilon
    return CoverageReport(
        H=H,
        Phi=phi,
        inertia_sum=jsum,
        D=D,
        epsilon=eps,
        sandwich_lhs_ok=H <= phi + jsum + tol,
        sandwich_rhs_ok=phi + jsum <= H + 2.0 * math.sqrt(2.0) * D * eps + tol,
    )
