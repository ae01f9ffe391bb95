"""Both sides of the harmonic energy identity on annuli, against the radial oracle.

    python3 demos/energy_identity.py
"""

from kahlerverify import harness, oracles
from kahlerverify.quadrature import Quadrature

for a, b in ((1.0, 2.0), (1.0, 4.0)):
    dom = harness.annulus_domain(a, b)
    f = harness.annulus_harmonic(a, b, dom.chart)
    res = harness.ibp_check(dom, f, Quadrature())
    print(f"annulus ({a:g}, {b:g})")
    print(f"  interior 2∫|ddbar f|^2 = {res.lhs:.10f}   oracle {oracles.annulus_lhs(a, b):.10f}")
    print(f"  boundary total         = {res.rhs:.10f}   oracle {oracles.annulus_rhs(a, b):.10f}")
    for name, val in res.boundary_terms.items():
        print(f"    {name:<28} {val:+.10f}")
    print(f"  relative error per level: {[f'{e:.1e}' for e in res.level_rel_errs]}")

ball = harness.ball_domain(1.0)
for seed in (0, 1):
    f, _ = harness.random_polynomial(seed, 3, ball.chart)
    res = harness.general_identity_check(ball, f, Quadrature())
    print(f"random cubic #{seed} on the unit ball: lhs = {res.lhs:.8f}, rhs = {res.rhs:.8f}, "
          f"rel err {res.rel_err:.1e}")
