"""Initial sensor configurations: weighted-D² seeding and uniform placement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discretization import CellPartition
from .geometry import ConvexPolygon


class SamplingError(ValueError):
    pass


class InsufficientCandidatesError(SamplingError):
    pass


class DegenerateDistributionError(SamplingError):
    pass


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream keyed by ``(seed, stream)``.

    The per-stream generator is derived through :class:`numpy.random.SeedSequence`
    spawn keys, so stream ``i`` yields the same draws whether trials run serially
    or in a worker pool.
    """

    seed: int
    stream: int = 0
    algorithm: str = "PCG64"

    def seed_sequence(self):
        return np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream),))

    def trial_seed(self) -> int:
        """64-bit seed fully determining this stream's generator."""
        return int(self.seed_sequence().generate_state(1, dtype=np.uint64)[0])

    def generator(self) -> np.random.Generator:
        bitgen = getattr(np.random, self.algorithm)
        return np.random.Generator(bitgen(self.trial_seed()))


def _as_generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _draw(cum, rng):
    """Categorical draw by inverting the cumulative sum with one uniform."""
    u = rng.random() * cum[-1]
    i = int(np.searchsorted(cum, u, side="right"))
    # u can round up to cum[-1]; step back onto the last positive-mass entry
    if i >= len(cum):
        i = int(np.searchsorted(cum, cum[-1], side="left"))
    return i


def d2_seed_indices(points, weights, k, rng):
    """Indices of ``k`` points chosen by weighted-D² sampling.

    First pick with probability proportional to ``w_i``; each later pick
    proportional to ``w_i * D(x_i)^2`` where ``D`` is the distance to the nearest
    point already chosen.
    """
    rng = _as_generator(rng)
    x = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    if k < 1:
        raise ValueError("k must be >= 1")
    if np.count_nonzero(w > 0) < k:
        raise InsufficientCandidatesError(
            f"need {k} positive-weight candidates, have {np.count_nonzero(w > 0)}"
        )
    cum = np.cumsum(w)
    if not cum[-1] > 0:
        raise DegenerateDistributionError("all candidate weights are zero")
    chosen = [_draw(cum, rng)]
    d2 = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        cum = np.cumsum(w * d2)
        if not cum[-1] > 0:
            raise DegenerateDistributionError("every remaining candidate is already covered")
        i = _draw(cum, rng)
        chosen.append(i)
        np.minimum(d2, ((x - x[i]) ** 2).sum(axis=1), out=d2)
    return np.array(chosen)


def weighted_d2_sample(cells: CellPartition, k: int, rng) -> np.ndarray:
    """``(k, 2)`` initial positions drawn from the cell centroids."""
    pts, w = cells.candidates
    return pts[d2_seed_indices(pts, w, k, rng)].copy()


def uniform_sample(domain: ConvexPolygon, k: int, rng) -> np.ndarray:
    """``k`` i.i.d. uniform points in the domain by bounding-box rejection."""
    rng = _as_generator(rng)
    if k < 1:
        raise ValueError("k must be >= 1")
    x0, y0, x1, y1 = domain.bounds
    out = []
    while len(out) < k:
        p = rng.uniform((x0, y0), (x1, y1))
        if domain.contains(p, tol=0.0):
            out.append(p)
    return np.array(out)
