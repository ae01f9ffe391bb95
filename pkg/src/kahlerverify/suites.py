"""Named verification suites.

Every check is a function of a shared :class:`Context` returning
``(computed, expected, residual)``; the runner compares the residual with the
(scaled) tolerance.  Exceptions inside a check become failed records, so a
broken geometry produces a report rather than a crash.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import jax.numpy as jnp
import numpy as np

from . import catalog, complexstruct as cs, curvature as cv, forms, harness, levi, oracles
from .fields import ScalarField, d, exterior_derivative
from .quadrature import Quadrature
from .report import RunConfig, VerificationReport, failed, judge

log = logging.getLogger(__name__)

SUITES = ("identities", "levi", "taub-nut", "ibp")
TN_RADII = (1.5, 2.0, 3.0, 5.0)
TN_SCALAR_RADII = (1.5, 2.0, 3.0, 5.0, 8.0)
RICCI_RADII = (1.1, 2.0, 5.0)
W_PLUS_G_MINUS_RADII = (2.0, 5.0)
SPHERE_RADII = (1.0, 2.0, 4.0)


@dataclass(frozen=True)
class Check:
    id: str
    suite: str
    description: str
    paper_ref: str
    tolerance: float
    fn: Callable


class Context:
    """Lazily built geometries shared by the checks of one run."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    @cached_property
    def tn(self) -> catalog.TaubNutGeometry:
        return catalog.taub_nut(self.cfg.m)

    @cached_property
    def flat(self) -> catalog.FlatC2:
        return catalog.flat_c2()

    @cached_property
    def product(self) -> catalog.ProductGeometry:
        return catalog.product_geometry()

    @property
    def quadrature(self) -> Quadrature:
        return Quadrature("gauss", self.cfg.resolution, self.cfg.refine)

    @cached_property
    def ball(self) -> harness.BoundedDomain:
        return harness.ball_domain(1.0)

    @cached_property
    def annulus(self) -> harness.BoundedDomain:
        return harness.annulus_domain(self.cfg.a, self.cfg.b)

    @cached_property
    def annulus_ibp(self) -> harness.IbpResult:
        f = harness.annulus_harmonic(self.cfg.a, self.cfg.b, self.annulus.chart)
        return harness.ibp_check(self.annulus, f, self.quadrature)

    @cached_property
    def ball_z2(self) -> harness.IbpResult:
        f = ScalarField(self.ball.chart, lambda x: x @ x, name="|z|^2")
        return harness.general_identity_check(self.ball, f, self.quadrature)

    @cached_property
    def ball_re_z1(self) -> harness.IbpResult:
        f = ScalarField(self.ball.chart, lambda x: x[0], name="Re z1")
        return harness.general_identity_check(self.ball, f, self.quadrature)

    def tn_point(self, r_over_m: float) -> np.ndarray:
        return self.tn.point(r_over_m * self.cfg.m)

    def tn_samples(self, n: int | None = None, seed_offset: int = 0) -> np.ndarray:
        return self.tn.sample(self.cfg.samples if n is None else n, seed=self.cfg.seed + seed_offset)


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


# ---------------------------------------------------------------- identities

def _star_flat(ctx: Context):
    pts = ctx.flat.chart.sample(min(ctx.cfg.samples, 64), seed=ctx.cfg.seed, ranges=((-2.0, 2.0),) * 4)
    coefs = [harness.random_coefficients(ctx.cfg.seed + k, 3) for k in range(20)]
    make = harness.polynomial_family(ctx.flat.chart, 3)
    worst = float(np.max(cs.verify_star_identity_family(ctx.flat.g, ctx.flat.J, make, coefs, pts)))
    return worst, 0.0, worst


def _tn_test_function(tn) -> ScalarField:
    return ScalarField(tn.chart, lambda x: x[0] ** 2 * jnp.cos(x[1]) + jnp.sin(x[2]) * x[0], name="probe")


def _star_triples(ctx: Context):
    pts = ctx.tn_samples(min(ctx.cfg.samples, 64), 1)
    f = _tn_test_function(ctx.tn)
    out = {}
    for sign, label in ((1, "J+ with (r-m)^-2 g"), (-1, "J- with (r+m)^-2 g")):
        g, J = ctx.tn.kahler_pair(sign)
        out[label] = float(np.max(cs.verify_star_identity(g, J, f, pts)))
    worst = max(out.values())
    return out, 0.0, worst


def _nijenhuis_jf(ctx: Context):
    m = ctx.cfg.m
    pts = ctx.tn_samples(min(ctx.cfg.samples, 64), 2)
    fs = {"4m(r-m)/(r+m)": lambda r: 4 * m * (r - m) / (r + m),
          "-4m(r-m)/(r+m)": lambda r: -4 * m * (r - m) / (r + m),
          "r": lambda r: r,
          "r^2/m": lambda r: r ** 2 / m}
    out = {k: float(np.max(cs.nijenhuis_max(catalog.j_f(ctx.tn, f, name=k), pts))) for k, f in fs.items()}
    return out, 0.0, max(out.values())


def _nijenhuis_deformed(ctx: Context):
    m = ctx.cfg.m
    J = catalog.deformed_j_f(ctx.tn, lambda r: 4 * m * (r - m) / (r + m), lambda r: 1 + r / (10 * m))
    n = float(np.max(cs.nijenhuis_max(J, ctx.tn.point(2 * m)[None, :])))
    return n, "> 1e-3", 1e-3 / n


def _d_squared(ctx: Context):
    f, _ = harness.random_polynomial(ctx.cfg.seed, 3, ctx.flat.chart)
    pts = ctx.flat.chart.sample(min(ctx.cfg.samples, 64), seed=ctx.cfg.seed)
    tn_f = _tn_test_function(ctx.tn)
    vals = [np.max(np.abs(d(d(f))(pts))), np.max(np.abs(d(d(ctx.tn.sigma[0]))(ctx.tn_samples(16, 3)))),
            np.max(np.abs(d(d(tn_f))(ctx.tn_samples(16, 3))))]
    return [float(v) for v in vals], 0.0, float(max(vals))


def _fd_forward(ctx: Context):
    omega = ctx.tn.omega_plus
    worst = 0.0
    for p in ctx.tn_samples(8, 4):
        a = exterior_derivative(omega, p, "forward").comps
        b = exterior_derivative(omega, p, "fd").comps
        worst = max(worst, float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)))))
    return worst, 0.0, worst


def _hodge_involution(ctx: Context):
    worst = 0.0
    for p in ctx.tn_samples(8, 5):
        G = np.asarray(ctx.tn.g(p))
        for k in range(5):
            a = forms.Form(k, np.random.default_rng(k).standard_normal(forms.RANK[k]))
            twice = forms.hodge_star(G, forms.hodge_star(G, a, -1), -1)
            worst = max(worst, float(np.max(np.abs(np.asarray(twice.comps) - (-1) ** (k * (4 - k)) * a.comps))))
    return worst, 0.0, worst


# ---------------------------------------------------------------------- levi

def _levi_count(ctx: Context) -> int:
    return min(ctx.cfg.samples, 64)


def _levi_flat_values(ctx, V, g, J):
    rep = levi.classify(V, g, J, sample_count=_levi_count(ctx), seed=ctx.cfg.seed)
    worst = float(np.max(np.abs(rep.values)))
    if rep.classification != levi.Classification.LEVI_FLAT:
        worst = max(worst, float("inf"))
    return rep.classification.value, worst


def _levi_affine(ctx: Context):
    out, worst = {}, 0.0
    for alpha in (0.0, 1.0):
        A = catalog.affine_levi_flat(alpha, validate=False)
        cls, w = _levi_flat_values(ctx, A.hypersurface, A.flat.g, A.flat.J)
        out[f"Im z1 = {alpha:g}"] = cls
        worst = max(worst, w)
    A = catalog.affine_levi_flat(1.0, validate=False)
    cls, w = _levi_flat_values(ctx, A.second, A.second_flat.g, A.second_flat.J)
    out["Im(1/z0) = 1"] = cls
    return out, "LeviFlat", max(worst, w)


def _levi_product(ctx: Context):
    P = ctx.product
    out, worst = {}, 0.0
    for c in (0.5, 1.0, 2.0):
        cls, w = _levi_flat_values(ctx, P.level_set(c), P.g, P.J)
        out[f"|w1| = {c:g}"] = cls
        worst = max(worst, w)
    return out, "LeviFlat", worst


def _levi_spheres(ctx: Context):
    out, worst = {}, 0.0
    F = ctx.flat
    for R in SPHERE_RADII:
        rep = levi.classify(catalog.sphere(F, R), F.g, F.J, sample_count=_levi_count(ctx), seed=ctx.cfg.seed)
        scaled = R * np.asarray(rep.values)
        out[f"R={R:g}"] = {"class": rep.classification.value, "R*L min": float(scaled.min()),
                           "R*L max": float(scaled.max())}
        err = float(np.max(np.abs(scaled - oracles.sphere_levi_value(R) * R)))
        if rep.classification != levi.Classification.STRICTLY_PSEUDOCONVEX:
            err = float("inf")
        worst = max(worst, err)
    return out, {"class": "StrictlyPseudoconvex", "R*L": 1.0}, worst


def _levi_flip(ctx: Context):
    F = ctx.flat
    worst = 0.0
    for R in SPHERE_RADII:
        S = catalog.sphere(F, R)
        pts = S.sample(_levi_count(ctx), seed=ctx.cfg.seed)
        a, _ = levi.levi_values(S, F.g, F.J, pts)
        b, _ = levi.levi_values(S.flipped(), F.g, F.J, pts)
        worst = max(worst, float(np.max(np.abs(a + b))))
    return worst, 0.0, worst


# ------------------------------------------------------------------ taub-nut

def _structure_equations(ctx: Context):
    res = catalog.structure_equation_residual(ctx.tn.sigma, ctx.tn_samples(None, 6))
    return res, 0.0, res


def _tn_base(ctx: Context):
    tn = ctx.tn
    out, worst = {}, 0.0
    for k in TN_RADII:
        pk = cv.curvature_pack(tn.g, ctx.tn_point(k), tn.unit_coframe(tn.g))
        vals = {"|Ric|": float(np.max(np.abs(pk.ricci_frame))), "|s|": abs(pk.scalar),
                "|W-|": float(np.max(np.abs(pk.w_minus)))}
        out[f"r={k:g}m"] = vals
        worst = max(worst, *vals.values())
    return out, 0.0, worst


def _tn_w_plus(ctx: Context):
    m = ctx.cfg.m
    r = 2 * m
    pk = cv.curvature_pack(ctx.tn.g, ctx.tn.point(r), ctx.tn.unit_coframe(ctx.tn.g))
    eig = np.sort(np.linalg.eigvalsh(pk.w_plus))
    factor = 8 * m / (r + m) ** 3
    expected = factor * np.array([-1.0, -1.0, 2.0])
    return eig.tolist(), expected.tolist(), float(np.max(np.abs(eig - expected)) / (2 * factor))


def _tn_scalar_plus(ctx: Context):
    m, tn = ctx.cfg.m, ctx.tn
    got, want = [], []
    for k in TN_SCALAR_RADII:
        r = k * m
        got.append(cv.curvature_pack(tn.g_plus, tn.point(r)).scalar)
        want.append(96 * m / (r + m))
    return got, want, max(abs(a - b) / abs(b) for a, b in zip(got, want))


def _tn_scalar_minus(ctx: Context):
    m, tn = ctx.cfg.m, ctx.tn
    got = [cv.curvature_pack(tn.g_minus, tn.point(k * m)).scalar for k in TN_SCALAR_RADII]
    return got, 0.0, max(abs(s) for s in got)


def _ricci_expected(m, r):
    return 4 * ((r - m) / (r + m)) ** 2 * np.array([-1.0, -1.0, 1.0, 1.0])


def _tn_ricci_minus(ctx: Context):
    m, tn = ctx.cfg.m, ctx.tn
    out, worst = {}, 0.0
    for k in RICCI_RADII:
        r = k * m
        pairs = cv.ricci_eigenstructure(tn.g_minus, tn.point(r), tn.unit_coframe(tn.g_minus))
        vals = np.array([e.value for e in pairs])
        exp = _ricci_expected(m, r)
        out[f"r={k:g}m"] = {"computed": vals.tolist(), "expected": exp.tolist()}
        worst = max(worst, _rel(vals, exp))
    return out, "4((r-m)/(r+m))^2 (-1,-1,1,1)", worst


def _tn_w_plus_minus(ctx: Context):
    m = ctx.cfg.m
    out = {f"r={k:g}m": cv.w_plus_check_g_minus(ctx.tn, ctx.tn.point(k * m)) for k in W_PLUS_G_MINUS_RADII}
    return out, 0.0, max(out.values())


def _derdzinski(ctx: Context):
    tn = ctx.tn
    g, J = tn.kahler_pair(-1)
    worst = 0.0
    for p in ctx.tn_samples(min(ctx.cfg.samples, 16), 7):
        pk = cv.curvature_pack(g, p, tn.unit_coframe(g))
        om = cv.self_dual_part(np.asarray(cs.kahler_form_fn(g.fn, J.fn, p)), pk.coframe)
        worst = max(worst, cv.w_plus_residual(pk, om, pk.scalar / 12))
    return worst, 0.0, worst


def _kahler_closed(ctx: Context):
    res = catalog.kahler_closedness(ctx.tn, ctx.tn_samples(None, 8))
    res3 = catalog.kahler_closedness(catalog.taub_nut(3.0), None)
    out = {"J+ (r-m)^-2 g": res[0], "J- (r+m)^-2 g": res[1], "m=3 J+": res3[0], "m=3 J-": res3[1]}
    return out, 0.0, max(out.values())


def _unconformal(ctx: Context):
    a, b = catalog.unconformal_closedness(ctx.tn, ctx.tn.point(2 * ctx.cfg.m))
    worst = min(a, b)
    return {"|d g(J+.,.)|": a, "|d g(J-.,.)|": b}, "> 1e-2", 1e-2 / worst


def _dlog_identity(ctx: Context):
    a, b = catalog.conformal_identity_residual(ctx.tn, ctx.tn_samples(None, 9))
    return {"+": a, "-": b}, 0.0, max(a, b)


def _omega_halves(ctx: Context):
    """``w+`` and ``w-`` are each self-dual for their own complex orientation
    and lie in opposite halves of ``Lambda^2``."""
    tn = ctx.tn
    worst = 0.0
    for p in ctx.tn_samples(16, 10):
        G = np.asarray(tn.g(p))
        for om, J in ((tn.omega_plus, tn.J_plus), (tn.omega_minus, tn.J_minus)):
            a = om.value(p)
            o = cs.complex_orientation(tn.g, J, p)
            worst = max(worst, float(np.max(np.abs(forms.hodge_star(G, a, o).comps - a.comps))))
        o_plus = cs.complex_orientation(tn.g, tn.J_plus, p)
        o_minus = cs.complex_orientation(tn.g, tn.J_minus, p)
        worst = max(worst, 0.0 if o_plus == -o_minus else float("inf"))
    return worst, 0.0, worst


# ----------------------------------------------------------------------- ibp

def _ibp_default(ctx: Context):
    res = ctx.annulus_ibp
    return {"lhs": res.lhs, "rhs": res.rhs, "level_rel_errs": list(res.level_rel_errs)}, 0.0, res.level_rel_errs[0]


def _ibp_refined(ctx: Context):
    res = ctx.annulus_ibp
    if len(res.level_rel_errs) < 2:
        raise SkipCheck("needs at least two refinement levels")
    return res.level_rel_errs[1], 0.0, res.level_rel_errs[1]


def _ibp_oracle(ctx: Context):
    res, a, b = ctx.annulus_ibp, ctx.cfg.a, ctx.cfg.b
    lhs_o, rhs_o = oracles.annulus_lhs_quad(a, b), oracles.annulus_rhs(a, b)
    err = max(abs(res.lhs - lhs_o) / abs(lhs_o), abs(res.rhs - rhs_o) / abs(rhs_o))
    return {"lhs": res.lhs, "rhs": res.rhs}, {"lhs": lhs_o, "rhs": rhs_o}, err


def _ibp_signs(ctx: Context):
    res, a, b = ctx.annulus_ibp, ctx.cfg.a, ctx.cfg.b
    outer, inner = res.boundary_terms[f"|z|={b:g}"], res.boundary_terms[f"|z|={a:g}"]
    parts = oracles.annulus_rhs_parts(a, b)
    ok = outer < 0 < inner
    err = max(abs(outer - parts["outer"]) / abs(parts["outer"]), abs(inner - parts["inner"]) / abs(parts["inner"]))
    return {"outer": outer, "inner": inner}, parts, err if ok else float("inf")


def _capacity(ctx: Context):
    a, b = ctx.cfg.a, ctx.cfg.b
    f = harness.annulus_harmonic(a, b, ctx.annulus.chart)
    val = harness.capacity(ctx.annulus, f, ctx.quadrature).value
    want = oracles.annulus_capacity_quad(a, b)
    return val, want, abs(val - want) / want


def _general_ball(ctx: Context):
    out = {"|z|^2": ctx.ball_z2.level_rel_errs[-1]}
    for k in range(5):
        f, _ = harness.random_polynomial(ctx.cfg.seed + 100 + k, 3, ctx.ball.chart)
        out[f"poly[{ctx.cfg.seed + 100 + k}]"] = harness.general_identity_check(ctx.ball, f, ctx.quadrature).rel_err
    return out, 0.0, max(out.values())


def _general_ball_oracle(ctx: Context):
    res = ctx.ball_z2
    want = oracles.ball_square_norm_terms(1.0)
    got = {"lhs": res.lhs, "laplacian_sq": res.interior_terms["laplacian_sq"],
           "boundary": res.interior_terms["boundary_total"]}
    return got, want, max(abs(got[k] - want[k]) / abs(want[k]) for k in want)


def _pluriharmonic(ctx: Context):
    res = ctx.ball_re_z1
    return ({"lhs": res.lhs, "laplacian_sq": res.interior_terms["laplacian_sq"],
             "boundary": res.interior_terms["boundary_total"]}, 0.0, abs(res.lhs))


def _pluriharmonic_boundary(ctx: Context):
    res = ctx.ball_re_z1
    worst = max(abs(res.interior_terms["laplacian_sq"]), *(abs(v) for v in res.boundary_terms.values()))
    return res.boundary_terms, 0.0, worst


class SkipCheck(Exception):
    pass


REF_STAR = "Hodge star of dJdf in terms of the Laplacian"
REF_TN = "Taub-NUT: "
CHECKS: tuple[Check, ...] = (
    Check("identities.star-flat", "identities", "*dJdf = -(Lap f) omega - dJdf for 20 random cubics on flat C^2",
          REF_STAR, 1e-9, _star_flat),
    Check("identities.star-kahler", "identities", "*dJdf identity on the two Taub-NUT Kähler pairs",
          REF_STAR, 1e-9, _star_triples),
    Check("identities.nijenhuis-jf", "identities", "Nijenhuis tensor of J_f for four choices of f",
          REF_TN + "integrability of J_f", 1e-8, _nijenhuis_jf),
    Check("identities.nijenhuis-deformed", "identities",
          "deformed J_f is detected as non-integrable (residual = 1e-3 / |N|)", "plumbing", 1.0, _nijenhuis_deformed),
    Check("identities.d-squared", "identities", "d(d(.)) = 0 on sample fields", "plumbing", 1e-9, _d_squared),
    Check("identities.fd-vs-forward", "identities", "forward-mode d agrees with central differences",
          "plumbing", 1e-6, _fd_forward),
    Check("identities.hodge-involution", "identities", "** = (-1)^{k(4-k)} on the Taub-NUT metric",
          "plumbing", 1e-9, _hodge_involution),
    Check("levi.affine-levi-flat", "levi", "{Im z1 = alpha} (alpha = 0, 1) and {Im(1/z0) = 1} are Levi-flat",
          "Levi-flat hypersurface in an affine chart", 1e-8, _levi_affine),
    Check("levi.product-levi-flat", "levi", "{|w1| = c} in P1 x P1 is Levi-flat for c = 0.5, 1, 2",
          "Levi-flat level sets in P1 x P1", 1e-8, _levi_product),
    Check("levi.sphere-convex", "levi", "round spheres are strictly pseudoconvex with L(J eta, eta) = 1/R",
          "Levi form definition", 1e-9, _levi_spheres),
    Check("levi.normal-flip", "levi", "flipping the normal negates every Levi value",
          "Levi form definition", 1e-12, _levi_flip),
    Check("taub-nut.structure-equations", "taub-nut", "d sigma^i = -eps_ijk sigma^j ^ sigma^k",
          REF_TN + "left-invariant coframe normalization", 1e-10, _structure_equations),
    Check("taub-nut.base-curvature", "taub-nut", "Ric, s and W- of g vanish at r = 1.5m, 2m, 3m, 5m",
          REF_TN + "Ricci-flat metric with one-sided Weyl curvature", 1e-7, _tn_base),
    Check("taub-nut.w-plus-eigenvalues", "taub-nut", "W+ of g at r = 2m equals 8m/(r+m)^3 (-1,-1,2)",
          REF_TN + "self-dual Weyl curvature", 1e-5, _tn_w_plus),
    Check("taub-nut.scalar-g-plus", "taub-nut", "s of (r+m)^-2 g equals 96m/(r+m) at five radii",
          REF_TN + "scalar curvature of g+", 1e-6, _tn_scalar_plus),
    Check("taub-nut.scalar-g-minus", "taub-nut", "(r-m)^-2 g is scalar-flat at five radii",
          REF_TN + "scalar curvature of g-", 1e-6, _tn_scalar_minus),
    Check("taub-nut.ricci-g-minus", "taub-nut", "Ric of g- in the unit coframe at r = 1.1m, 2m, 5m",
          REF_TN + "Ricci curvature of g-", 1e-5, _tn_ricci_minus),
    Check("taub-nut.w-plus-g-minus", "taub-nut", "W+ of g- against 8m(r-m)^2/(r+m)^3 (3/2 w⊗w - Id) at r = 2m, 5m",
          REF_TN + "self-dual Weyl curvature of g-", 1e-5, _tn_w_plus_minus),
    Check("taub-nut.derdzinski", "taub-nut", "W+ of the Kähler metric (r+m)^-2 g is s/12 (3/2 w⊗w - Id)",
          REF_TN + "Derdzinski form of W+ for Kähler metrics", 1e-5, _derdzinski),
    Check("taub-nut.kahler-closed", "taub-nut", "(r∓m)^-2 g(J±., .) is closed (m = config and m = 3)",
          REF_TN + "conformally Kähler pairs", 1e-9, _kahler_closed),
    Check("taub-nut.unconformal-not-closed", "taub-nut",
          "g(J±., .) is not closed at r = 2m (residual = 1e-2 / min |d omega|)",
          REF_TN + "J± are not Kähler for g", 1.0, _unconformal),
    Check("taub-nut.dlog-identity", "taub-nut", "d omega± = d log (r∓m)^2 ^ omega±",
          REF_TN + "exterior derivative of the fundamental forms", 1e-9, _dlog_identity),
    Check("taub-nut.omega-halves", "taub-nut", "omega± are self-dual for opposite complex orientations",
          REF_TN + "fundamental forms of J±", 1e-9, _omega_halves),
    Check("ibp.annulus-default", "ibp", "2∫|ddbar f|^2 vs -∫L(*(Jdf^df)) on the annulus, default grid",
          "integration by parts for harmonic functions", 2e-3, _ibp_default),
    Check("ibp.annulus-refined", "ibp", "same identity after one refinement",
          "integration by parts for harmonic functions", 1e-4, _ibp_refined),
    Check("ibp.annulus-oracle", "ibp", "both sides against the 1-D radial oracle",
          "integration by parts for harmonic functions", 1e-4, _ibp_oracle),
    Check("ibp.annulus-boundary-signs", "ibp", "outer sphere contributes negatively, inner positively",
          "boundary term as a Levi form", 1e-4, _ibp_signs),
    Check("ibp.capacity", "ibp", "∫|df|^2 on the annulus against the radial oracle",
          "harmonic capacity", 1e-6, _capacity),
    Check("ibp.general-ball", "ibp", "4∫|ddbar f|^2 = ∫(Lap f)^2 - ∫_∂ Jdf^dJdf for |z|^2 and 5 cubics",
          "integration by parts for general functions", 1e-4, _general_ball),
    Check("ibp.general-ball-oracle", "ibp", "terms of the general identity for |z|^2 against closed forms",
          "integration by parts for general functions", 1e-6, _general_ball_oracle),
    Check("ibp.pluriharmonic-lhs", "ibp", "f = Re z1: the interior term vanishes exactly",
          "harmonic implies pluriharmonic on Levi-flat boundaries", 0.0, _pluriharmonic),
    Check("ibp.pluriharmonic-boundary", "ibp", "f = Re z1: Laplacian and boundary terms vanish",
          "harmonic implies pluriharmonic on Levi-flat boundaries", 1e-8, _pluriharmonic_boundary),
)


def checks_for(suite: str) -> list[Check]:
    if suite == "all":
        return list(CHECKS)
    if suite not in SUITES:
        raise KeyError(suite)
    return [c for c in CHECKS if c.suite == suite]


def run_checks(checks, cfg: RunConfig) -> VerificationReport:
    ctx = Context(cfg)
    report = VerificationReport(config=cfg.snapshot())
    for chk in checks:
        tol = chk.tolerance * cfg.tol_scale
        log.info("running %s", chk.id)
        try:
            computed, expected, residual = chk.fn(ctx)
            rec = judge(chk.id, chk.description, chk.paper_ref, computed, expected, residual, tol)
        except SkipCheck as exc:
            rec = judge(chk.id, chk.description, chk.paper_ref, None, None, float("nan"), tol, str(exc))
            rec.status = "skipped"
        except Exception as exc:  # noqa: BLE001 - every failure becomes a report entry
            log.warning("check %s raised %s", chk.id, exc)
            rec = failed(chk.id, chk.description, chk.paper_ref, tol, exc)
        report.checks.append(rec)
    return report


def run_suite(name: str, cfg: RunConfig) -> tuple[VerificationReport, int]:
    """Run a named suite; the exit code is 0 iff no non-skipped check failed."""
    report = run_checks(checks_for(name), cfg)
    return report, report.exit_code
