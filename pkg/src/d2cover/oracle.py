"""Exact weighted k-means optima on small instances and checks of the
D²-seeding guarantees against them.

The optimum is found by enumerating set partitions (restricted-growth
strings): once the clusters are fixed the best centre of each is its weighted
centroid, so partitions are the only real decision variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coverage import wkmeans_cost
from .sampling import d2_seed_indices

MAX_POINTS = 12
MAX_CENTERS = 3


class InstanceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedPointSet:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if p.ndim != 2 or len(p) != len(w):
            raise ValueError("points must be (n, d) with one weight per point")
        if np.any(w < 0) or not np.any(w > 0):
            raise ValueError("weights must be nonnegative with at least one positive")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.weights)

    @classmethod
    def random(cls, n, rng, d=2):
        rng = np.random.default_rng(rng)
        return cls(rng.random((n, d)), rng.uniform(0.05, 1.0, n))


@lru_cache(maxsize=None)
def restricted_growth_strings(n: int, k: int) -> np.ndarray:
    """All labellings of ``n`` items into at most ``k`` unlabeled nonempty blocks.

    Row ``r`` is a restricted-growth string: ``a[0] = 0`` and
    ``a[i] <= 1 + max(a[:i])``.
    """
    rows = []
    a = [0] * n

    def rec(i, m):
        if i == n:
            rows.append(a.copy())
            return
        for b in range(min(m + 2, k)):
            a[i] = b
            rec(i + 1, max(m, b))

    if n:
        rec(1, 0)
    out = np.array(rows, dtype=np.int8).reshape(-1, n)
    out.setflags(write=False)
    return out


def cluster_cost(points, weights):
    """Weighted cost of one cluster about its weighted centroid."""
    w = np.asarray(weights, dtype=float)
    x = np.asarray(points, dtype=float)
    if w.sum() <= 0:
        return 0.0, x.mean(axis=0)
    c = w @ x / w.sum()
    return float(w @ ((x - c) ** 2).sum(axis=1)), c


def brute_force_opt(pset: WeightedPointSet, k: int):
    """Optimal weighted k-means ``(cost, centers)`` by exhaustive partition search."""
    n = len(pset)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= n:
        return 0.0, pset.points.copy()
    if n > MAX_POINTS or k > MAX_CENTERS:
        raise InstanceTooLargeError(f"n={n}, k={k} exceeds the enumeration budget")
    x, w = pset.points, pset.weights
    labels = restricted_growth_strings(n, k)
    wx = w[:, None] * x
    wxx = w * (x * x).sum(axis=1)
    total = np.zeros(len(labels))
    for b in range(k):
        m = (labels == b).astype(float)
        wb = m @ w
        sb = m @ wx
        qb = m @ wxx
        with np.errstate(invalid="ignore", divide="ignore"):
            cost_b = qb - (sb * sb).sum(axis=1) / wb
        total += np.where(wb > 0, cost_b, 0.0)
    best = labels[int(np.argmin(total))]
    centers, cost = [], 0.0
    for b in range(int(best.max()) + 1):
        sel = best == b
        c_cost, c = cluster_cost(x[sel], w[sel])
        cost += c_cost
        centers.append(c)
    return cost, np.array(centers)


# -- single-cluster expectations ------------------------------------------------------

def seeded_expectation(pset: WeightedPointSet, existing=None):
    """Exact expected one-cluster cost after adding one centre drawn from the set.

    With no ``existing`` centres the draw is proportional to ``w_i``; otherwise
    it is proportional to ``w_i D(x_i)^2`` with ``D`` the distance to the
    nearest existing centre, and every point keeps the smaller of its old and
    new squared distance.
    """
    x, w = pset.points, pset.weights
    pair = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
    if existing is None or len(existing) == 0:
        prob = w / w.sum()
        after = pair
    else:
        c = np.asarray(existing, dtype=float).reshape(-1, x.shape[1])
        d2 = ((x[:, None, :] - c[None, :, :]) ** 2).sum(axis=2).min(axis=1)
        mass = w * d2
        if mass.sum() <= 0:
            return 0.0
        prob = mass / mass.sum()
        after = np.minimum(d2[None, :], pair)
    return float(prob @ (after @ w))


def single_centre_exact(pset: WeightedPointSet):
    """``(exact expectation, optimal one-centre cost)`` for a single cluster."""
    opt, _ = cluster_cost(pset.points, pset.weights)
    return seeded_expectation(pset), opt


def lemma1_check(pset: WeightedPointSet, trials: int, rng, tol=1e-10) -> float:
    """Monte-Carlo ratio ``E[cost] / opt`` for one centre drawn with prob. ``w_i``.

    Also verifies the closed-form expectation equals twice the optimum and
    raises ``ArithmeticError`` if it does not. A zero-cost cluster (single
    point) returns ratio 1.
    """
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    exact, opt = single_centre_exact(pset)
    if abs(exact - 2.0 * opt) > tol * max(1.0, opt):
        raise ArithmeticError(f"exact expectation {exact!r} != 2 * {opt!r}")
    if opt <= 0:
        return 1.0
    x, w = pset.points, pset.weights
    pick = rng.choice(len(w), size=trials, p=w / w.sum())
    pair = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2)
    costs = pair[pick] @ w
    return float(costs.mean() / opt)


def one_addition_exact(pset: WeightedPointSet, existing):
    """``(exact expectation, 8 * optimal cost)`` for one D²-sampled addition."""
    opt, _ = cluster_cost(pset.points, pset.weights)
    return seeded_expectation(pset, existing), 8.0 * opt


# -- full seeding guarantee -----------------------------------------------------

def competitive_bound(k: int) -> float:
    return 8.0 * (math.log(k) + 2.0)


@dataclass(frozen=True)
class BoundCheckReport:
    mean_sampled_cost: float
    opt_cost: float
    ratio: float
    bound: float
    trials: int
    passed: bool


def theorem3_check(pset: WeightedPointSet, k: int, trials: int, rng) -> BoundCheckReport:
    """Average weighted k-means cost of D² seeding over ``trials`` draws versus
    ``8 (ln k + 2)`` times the brute-force optimum."""
    rng = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    opt, _ = brute_force_opt(pset, k)
    x, w = pset.points, pset.weights
    total = 0.0
    for _ in range(trials):
        idx = d2_seed_indices(x, w, k, rng)
        total += wkmeans_cost(x[idx], x, w)
    mean = total / trials
    bound = competitive_bound(k)
    ratio = mean / opt if opt > 0 else (1.0 if mean <= 0 else math.inf)
    return BoundCheckReport(mean, opt, ratio, bound, trials, mean <= bound * opt + 1e-12)
