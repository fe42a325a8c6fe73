"""Numerical checks of the seeding guarantees on small weighted point sets.

Exact expectations are finite sums over the sampling distribution; the optimum
comes from exhaustive search over set partitions. Run with
``python3 demos/04_seeding_guarantees.py``.
"""

import numpy as np

from d2cover.oracle import (
    WeightedPointSet,
    brute_force_opt,
    competitive_bound,
    single_centre_exact,
    one_addition_exact,
    theorem3_check,
)

rng = np.random.default_rng(1)

# One centre drawn with probability proportional to weight costs exactly
# twice the optimum in expectation.
pset = WeightedPointSet.random(8, rng)
exact, opt = single_centre_exact(pset)
print(f"single cluster: E[cost] = {exact:.6f}, 2 * opt = {2 * opt:.6f}")

# Adding one D²-sampled centre to an arbitrary existing set.
existing = rng.random((2, 2))
e2, bound = one_addition_exact(pset, existing)
print(f"one D2 addition: E[cost] = {e2:.6f} <= 8 * opt = {bound:.6f}")

# Full seeding against the exhaustive optimum.
print("\nfull seeding, 10^4 draws per instance:")
for n, k in [(8, 2), (10, 2), (12, 3)]:
    pset = WeightedPointSet.random(n, rng)
    rep = theorem3_check(pset, k, 10_000, rng)
    opt, centers = brute_force_opt(pset, k)
    print(
        f"  n={n:2d} k={k}: mean cost {rep.mean_sampled_cost:.5f}, opt {opt:.5f}, "
        f"ratio {rep.ratio:.2f} (bound {competitive_bound(k):.1f})"
    )
