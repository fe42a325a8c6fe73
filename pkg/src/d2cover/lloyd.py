"""Damped Lloyd descent toward a centroidal Voronoi configuration.

Each sensor follows ``dp/dt = -K (p - c)`` where ``c`` is the mass centroid of
its current Voronoi cell, integrated with explicit Euler steps of size ``dt``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coverage import cell_costs
from .density import DEFAULT_DEPTH
from .geometry import ConvexPolygon

EMPTY_CELL_WEIGHT = 1e-15


@dataclass(frozen=True)
class DescentSettings:
    gain: float = 10.0
    dt: float = 0.01
    convergence_threshold: float = 1e-4
    max_iterations: int = 10000
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if not (self.gain > 0 and self.dt > 0):
            raise ValueError("gain and dt must be positive")
        if self.gain * self.dt > 1.0 + 1e-12:
            raise ValueError("gain * dt > 1 overshoots the centroid")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")

    @property
    def step_fraction(self) -> float:
        return self.gain * self.dt


@dataclass
class DescentTrace:
    iterates: list = field(default_factory=list)
    coverage_history: list = field(default_factory=list)
    per_sensor_distance: np.ndarray = None
    converged: bool = False
    iterations: int = 0

    @property
    def initial(self):
        return self.iterates[0]

    @property
    def final(self):
        return self.iterates[-1]

    @property
    def mean_distance(self) -> float:
        return float(np.mean(self.per_sensor_distance))


def _advance(P, field_, domain, settings, partition=None):
    w, c, j, part = cell_costs(P, field_, domain, settings.depth, partition)
    move = settings.step_fraction * (c - P)
    move[w < EMPTY_CELL_WEIGHT] = 0.0
    return P + move, move, float(j.sum()), part


def lloyd_step(P, field_, domain: ConvexPolygon, settings: DescentSettings = DescentSettings()):
    """One Euler step; returns ``(new positions, mean L1 displacement)``."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    new, move, _, _ = _advance(P, field_, domain, settings)
    return new, float(np.abs(move).sum(axis=1).mean())


def run_descent(P0, field_, domain: ConvexPolygon, settings: DescentSettings = DescentSettings()) -> DescentTrace:
    """Iterate :func:`lloyd_step` until the mean L1 displacement per step drops
    below the threshold or ``max_iterations`` is reached.

    Coverage is recorded for every iterate, including the initial one.
    """
    P = np.array(P0, dtype=float).reshape(-1, 2)
    trace = DescentTrace(iterates=[P.copy()], per_sensor_distance=np.zeros(len(P)))
    for _ in range(settings.max_iterations):
        new, move, H, _ = _advance(P, field_, domain, settings)
        trace.coverage_history.append(H)
        trace.per_sensor_distance += np.hypot(move[:, 0], move[:, 1])
        trace.iterations += 1
        trace.iterates.append(new)
        P = new
        if np.abs(move).sum(axis=1).mean() < settings.convergence_threshold:
            trace.converged = True
            break
    _, _, j, _ = cell_costs(P, field_, domain, settings.depth)
    trace.coverage_history.append(float(j.sum()))
    return trace
