"""Curvature of the Taub-NUT metric and of its two conformally Kähler partners.

    python3 demos/taub_nut_tour.py [m]
"""

import sys

import numpy as np

from kahlerverify import catalog, curvature as cv

m = float(sys.argv[1]) if len(sys.argv) > 1 else 1.0
tn = catalog.taub_nut(m)
print(f"Taub-NUT with m = {m}")
print(f"{'r':>6} {'|Ric g|':>10} {'s(g+)':>12} {'96m/(r+m)':>12} {'s(g-)':>10}  W+ eigenvalues of g / (8m/(r+m)^3)")
for r in (1.5 * m, 2 * m, 3 * m, 5 * m, 10 * m):
    p = tn.point(r, 1.1, 0.7, 2.3)
    base = cv.curvature_pack(tn.g, p, tn.unit_coframe(tn.g))
    s_plus = cv.curvature_pack(tn.g_plus, p).scalar
    s_minus = cv.curvature_pack(tn.g_minus, p).scalar
    w = np.sort(np.linalg.eigvalsh(base.w_plus)) / (8 * m / (r + m) ** 3)
    print(f"{r:6.2f} {np.linalg.norm(base.ricci):10.2e} {s_plus:12.8f} {96 * m / (r + m):12.8f} "
          f"{s_minus:10.2e}  {np.array2string(w, precision=6)}")

closed, _ = catalog.kahler_closedness(tn)
print(f"\nsup |d omega| after the conformal change: {closed:.2e}")
