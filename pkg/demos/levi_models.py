"""Levi form on model hypersurfaces: round spheres, affine and product Levi-flat levels.

    python3 demos/levi_models.py
"""

import numpy as np

from kahlerverify import catalog, levi

flat = catalog.flat_c2()
for R in (1.0, 2.0, 4.0):
    rep = levi.classify(catalog.sphere(flat, R), flat.g, flat.J, sample_count=64)
    vals = np.asarray(rep.values)
    print(f"sphere R = {R:g}: {rep.classification.value:<22} R·L in [{R * vals.min():.12f}, {R * vals.max():.12f}]")
    flipped = levi.classify(catalog.sphere(flat, R).flipped(), flat.g, flat.J, sample_count=64)
    print(f"  with inward normal: {flipped.classification.value}")

A = catalog.affine_levi_flat(1.0)
rep = levi.classify(A.hypersurface, A.flat.g, A.flat.J, sample_count=64)
print(f"Im z1 = 1: {rep.classification.value}, max |L| = {np.max(np.abs(rep.values)):.1e}")

P = catalog.product_geometry()
for c in (0.5, 2.0):
    rep = levi.classify(P.level_set(c), P.g, P.J, sample_count=64)
    print(f"|w1| = {c:g} in P1 x P1: {rep.classification.value}, max |L| = {np.max(np.abs(rep.values)):.1e}")
