"""Randomised verification of the coverage and seeding guarantees.

Each check returns a :class:`CheckResult`; ``cover check`` prints them and
exits non-zero if any fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coverage import SANDWICH_TOL, coverage_cost, sandwich_check
from .density import normalize, reference_density
from .discretization import build_cells
from .geometry import ConvexPolygon
from .lloyd import DescentSettings, run_descent
from .oracle import (
    WeightedPointSet,
    competitive_bound,
    single_centre_exact,
    one_addition_exact,
    theorem3_check,
)
from .sampling import RngStream, uniform_sample, weighted_d2_sample


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    values: dict = field(default_factory=dict)

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _rng(seed, stream):
    return RngStream(seed, stream).generator()


def check_sandwich(seed=0, epsilons=(0.1, 0.05), configs=20, k=10, tol=SANDWICH_TOL):
    Q = ConvexPolygon.unit_square()
    f = normalize(reference_density(), Q)
    rng = _rng(seed, 1)
    results = []
    for eps in epsilons:
        cells = build_cells(Q, eps, f)
        reports = [sandwich_check(uniform_sample(Q, k, rng), f, Q, cells, tol=tol) for _ in range(configs)]
        ok = sum(r.ok for r in reports)
        worst_lhs = min(r.gap for r in reports)
        worst_rhs = max(r.gap - r.slack for r in reports)
        results.append(
            CheckResult(
                f"sandwich eps={eps}",
                ok == configs,
                f"{ok}/{configs} configurations; min(Phi+J-H)={worst_lhs:.3e}, "
                f"max(Phi+J-H-2sqrt2*D*eps)={worst_rhs:.3e}, tol={tol:g}",
                {"reports": reports},
            )
        )
    return results


def check_single_centre(seed=0, instances=100, max_n=10, tol=1e-10):
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(instances):
        pset = WeightedPointSet.random(int(rng.integers(2, max_n + 1)), rng)
        exact, opt = single_centre_exact(pset)
        worst = max(worst, abs(exact - 2.0 * opt))
    return CheckResult(
        "single-centre expectation equals twice optimum",
        worst <= tol,
        f"{instances} instances, max |E - 2 opt| = {worst:.2e} (tol {tol:g})",
        {"max_error": worst},
    )


def check_one_addition(seed=0, instances=100, max_n=10, tol=1e-10):
    rng = _rng(seed, 3)
    worst_ratio = 0.0
    ok = 0
    for _ in range(instances):
        pset = WeightedPointSet.random(int(rng.integers(2, max_n + 1)), rng)
        existing = rng.random((int(rng.integers(1, 4)), 2))
        exp, bound = one_addition_exact(pset, existing)
        ok += exp <= bound + tol
        if bound > 0:
            worst_ratio = max(worst_ratio, exp / (bound / 8.0))
    return CheckResult(
        "D2 addition within 8x single-cluster optimum",
        ok == instances,
        f"{ok}/{instances} instances, worst E/opt = {worst_ratio:.3f} (bound 8)",
        {"worst_ratio": worst_ratio},
    )


def check_seeding_bound(seed=0, instances=100, trials=10_000, max_n=12, max_k=3):
    rng = _rng(seed, 4)
    reports = []
    for _ in range(instances):
        n = int(rng.integers(4, max_n + 1))
        k = int(rng.integers(1, max_k + 1))
        pset = WeightedPointSet.random(n, rng)
        reports.append(theorem3_check(pset, k, trials, rng))
    ok = sum(r.passed for r in reports)
    worst = max(r.ratio / r.bound for r in reports)
    return CheckResult(
        "D2 seeding within 8(ln k + 2) of optimum",
        ok == instances,
        f"{ok}/{instances} instances x {trials} trials, worst ratio/bound = {worst:.3f}",
        {"reports": reports},
    )


def check_expected_coverage(seed=0, k=10, epsilon=0.1, samples=200, descents=5, settings=None):
    """Expected coverage of D² placements against the competitive bound.

    The optimum ``H(P*)`` is unknown; the best final coverage over a few Lloyd
    descents stands in for it. That estimate is an upper bound on ``H(P*)``, so
    this is a consistency check rather than a proof-grade one. The ``D eps``
    term is dropped, which only tightens the inequality.
    """
    Q = ConvexPolygon.unit_square()
    f = normalize(reference_density(), Q)
    cells = build_cells(Q, epsilon, f)
    settings = settings or DescentSettings()
    rng = _rng(seed, 5)
    h_samples = [coverage_cost(weighted_d2_sample(cells, k, rng), f, Q) for _ in range(samples)]
    best = min(
        run_descent(weighted_d2_sample(cells, k, rng), f, Q, settings).coverage_history[-1]
        for _ in range(descents)
    )
    mean_h = float(np.mean(h_samples))
    bound = competitive_bound(k) * best + cells.inertia_sum
    return CheckResult(
        "expected D2 coverage within competitive bound",
        mean_h <= bound,
        f"E[H]={mean_h:.5f} <= 8(ln {k}+2)*{best:.5f} + sumJ={cells.inertia_sum:.5f} -> {bound:.5f}",
        {"mean_H": mean_h, "bound": bound},
    )


def run_all(seed=0, quick=False):
    """Full suite; ``quick`` trims instance and trial counts for smoke runs."""
    scale = 10 if quick else 1
    results = []
    results += check_sandwich(seed, configs=max(2, 20 // scale))
    results.append(check_single_centre(seed, instances=100 // scale))
    results.append(check_one_addition(seed, instances=100 // scale))
    results.append(check_seeding_bound(seed, instances=100 // scale, trials=10_000 // scale))
    results.append(check_expected_coverage(seed, samples=max(20, 200 // scale), descents=max(1, 5 // scale)))
    return results


def all_passed(results):
    return bool(results) and all(r.passed for r in results)
