"""Density field, normalization and the candidate grid.

Run with ``python3 demos/01_density_and_grid.py``.
"""

import numpy as np

from d2cover import ConvexPolygon, build_cells, evaluate, normalize, reference_density

Q = ConvexPolygon.unit_square()

# Two anisotropic Gaussian bumps; normalize() integrates the raw field over Q
# and stores the constant so that the field has unit mass.
field = normalize(reference_density(), Q)
print(f"normalization constant A = {field.normalization:.7f}")
print("density at a few points:")
for q in [(0.75, 0.75), (0.25, 0.25), (0.5, 0.5), (0.0, 1.0)]:
    print(f"  phi{q} = {evaluate(field, q):.4f}")

# Superimpose a square grid of side epsilon; every cell gets a mass, a mass
# centroid and a moment of inertia about that centroid.
for eps in (0.1, 0.05):
    cells = build_cells(Q, eps, field)
    pts, w = cells.candidates
    heavy = np.argsort(w)[::-1][:3]
    print(f"\nepsilon = {eps}: {len(cells.polygons)} cells, sum w = {cells.weights.sum():.8f}")
    print(f"  sum of cell inertias = {cells.inertia_sum:.6f}")
    print("  heaviest cells:")
    for i in heavy:
        print(f"    centroid ({pts[i, 0]:.3f}, {pts[i, 1]:.3f})  weight {w[i]:.4f}")

# Halving epsilon divides the inertia sum by roughly four.
r = build_cells(Q, 0.05, field).inertia_sum / build_cells(Q, 0.1, field).inertia_sum
print(f"\ninertia ratio after halving epsilon: {r:.3f}")
