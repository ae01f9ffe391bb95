"""Integration-by-parts harness: model domains, oracles and the energy identities."""

import math

import jax.numpy as jnp
import numpy as np
import pytest
import sympy as sp

from kahlerverify import catalog, harness, oracles
from kahlerverify.errors import InvalidAnnulus, NotHarmonic
from kahlerverify.fields import ScalarField, laplacian
from kahlerverify.quadrature import Quadrature

Q = Quadrature(resolution=16)
PI2 = np.pi ** 2


# ------------------------------------------------------------------ oracles

def test_closed_forms_agree_with_radial_quadrature():
    for a, b in ((1.0, 2.0), (1.0, 4.0), (0.5, 3.0)):
        assert oracles.annulus_lhs(a, b) == pytest.approx(oracles.annulus_lhs_quad(a, b), rel=1e-12)
        assert oracles.annulus_capacity(a, b) == pytest.approx(oracles.annulus_capacity_quad(a, b), rel=1e-12)
        assert oracles.annulus_lhs(a, b) == pytest.approx(oracles.annulus_rhs(a, b), rel=1e-12)


def test_hand_values_for_unit_annulus():
    assert oracles.annulus_lhs(1, 2) == pytest.approx(40 * PI2 / 3)
    parts = oracles.annulus_rhs_parts(1, 2)
    assert parts["outer"] == pytest.approx(-8 * PI2 / 9)
    assert parts["inner"] == pytest.approx(128 * PI2 / 9)
    assert oracles.annulus_capacity(1, 2) == pytest.approx(16 * PI2 / 3)
    assert oracles.ball_square_norm_terms(1.0) == pytest.approx(
        {"lhs": 16 * PI2, "laplacian_sq": 32 * PI2, "boundary": 16 * PI2})


def test_oracle_file_matches_closed_forms():
    rows = harness.read_oracles()
    assert rows["annulus-1-2.lhs"].expected == pytest.approx(oracles.annulus_lhs(1, 2), rel=1e-14)
    assert rows["annulus-1-2.rhs"].expected == pytest.approx(oracles.annulus_rhs(1, 2), rel=1e-14)
    assert rows["annulus-1-2.rhs-outer"].expected == pytest.approx(oracles.annulus_rhs_parts(1, 2)["outer"])
    assert rows["annulus-1-4.rhs-inner"].expected == pytest.approx(oracles.annulus_rhs_parts(1, 4)["inner"])
    assert rows["annulus-1-4.capacity"].expected == pytest.approx(oracles.annulus_capacity(1, 4))
    assert rows["ball-1.z2.boundary"].expected == pytest.approx(16 * PI2)
    assert rows["sphere.levi-times-R"].expected == 1.0
    assert all(r.note for r in rows.values())


def test_oracle_round_trip(tmp_path):
    rows = list(harness.read_oracles().values())
    path = tmp_path / "o.txt"
    harness.write_oracles(rows, path)
    again = harness.read_oracles(path)
    assert [again[r.check_id] for r in rows] == rows
    path.write_text("only-an-id\n")
    with pytest.raises(ValueError):
        harness.read_oracles(path)


# ------------------------------------------------------------------ domains

def test_annulus_harmonic_boundary_values_and_laplacian(annulus12):
    f = harness.annulus_harmonic(1.0, 2.0, annulus12.chart)
    assert float(f(np.array([1.0, 0, 0, 0]))) == pytest.approx(1.0)
    assert float(f(np.array([0, 0, 0, 2.0]))) == pytest.approx(0.0, abs=1e-15)
    pts = annulus12.sample_interior(100, seed=5)
    assert np.all(annulus12.contains(pts))
    assert np.max(np.abs(laplacian(annulus12.g, f, pts))) < 1e-9


@pytest.mark.parametrize("a,b", [(2.0, 1.0), (1.0, 1.0), (0.0, 1.0)])
def test_invalid_annulus(a, b):
    with pytest.raises(InvalidAnnulus):
        harness.annulus_domain(a, b)
    with pytest.raises(InvalidAnnulus):
        harness.annulus_harmonic(a, b)


def test_inward_normal_is_rejected(ball):
    flat = ball.geometry
    inward = catalog.sphere(flat, 1.0, normal_sign=-1)
    bad = harness.BoundedDomain("bad", flat, ball.region, (inward,), 0.0, 1.0)
    with pytest.raises(ValueError):
        bad.validate()


def test_relative_error_floor():
    assert harness.relative_error(0.0, 0.0) == 0.0
    assert harness.relative_error(1e-13, 0.0) == pytest.approx(0.1)
    assert harness.relative_error(2.0, 1.0) == 0.5


# ------------------------------------------------------------------ identities

def test_ibp_annulus_1_2(annulus12):
    f = harness.annulus_harmonic(1.0, 2.0, annulus12.chart)
    res = harness.ibp_check(annulus12, f, Q)
    assert res.rel_err < 1e-4
    assert len(res.level_rel_errs) == 2 and res.level_rel_errs[0] < 2e-3
    assert res.lhs == pytest.approx(oracles.annulus_lhs(1, 2), rel=1e-4)
    assert res.rhs == pytest.approx(oracles.annulus_rhs(1, 2), rel=1e-4)


def test_ibp_annulus_1_4_boundary_signs():
    dom = harness.annulus_domain(1.0, 4.0)
    f = harness.annulus_harmonic(1.0, 4.0, dom.chart)
    res = harness.ibp_check(dom, f, Q)
    outer, inner = (res.boundary_terms[V.name] for V in dom.boundary)
    parts = oracles.annulus_rhs_parts(1.0, 4.0)
    assert outer < 0 < inner
    assert outer == pytest.approx(parts["outer"], rel=1e-4)
    assert inner == pytest.approx(parts["inner"], rel=1e-4)
    assert res.rel_err < 1e-4


def test_capacity_is_monotone_as_predicted():
    caps = {}
    for b in (2.0, 4.0):
        dom = harness.annulus_domain(1.0, b)
        caps[b] = harness.capacity(dom, harness.annulus_harmonic(1.0, b, dom.chart), Q).value
        assert caps[b] == pytest.approx(oracles.annulus_capacity(1.0, b), rel=1e-6)
    assert np.sign(caps[4.0] - caps[2.0]) == np.sign(oracles.annulus_capacity(1, 4) - oracles.annulus_capacity(1, 2))


def test_constant_function_gives_zero(annulus12, ball):
    one = ScalarField(annulus12.chart, lambda x: 1.0 + 0 * x[0])
    res = harness.ibp_check(annulus12, one, Quadrature(resolution=4))
    assert res.lhs == 0.0 and res.rhs == 0.0 and res.rel_err == 0.0
    assert harness.capacity(annulus12, one, Quadrature(resolution=4)).value == 0.0
    gen = harness.general_identity_check(ball, ScalarField(ball.chart, lambda x: 2.0 + 0 * x[0]),
                                         Quadrature(resolution=4))
    assert gen.lhs == 0.0 and gen.rhs == 0.0


def test_ibp_requires_harmonic(ball):
    with pytest.raises(NotHarmonic):
        harness.ibp_check(ball, ScalarField(ball.chart, lambda x: x @ x), Q)


def test_general_identity_z_squared(ball):
    res = harness.general_identity_check(ball, ScalarField(ball.chart, lambda x: x @ x), Q)
    want = oracles.ball_square_norm_terms(1.0)
    assert res.level_rel_errs[0] < 1e-4 and res.level_rel_errs[-1] < 1e-6
    assert res.lhs == pytest.approx(want["lhs"], rel=1e-10)
    assert res.interior_terms["laplacian_sq"] == pytest.approx(want["laplacian_sq"], rel=1e-10)
    assert res.interior_terms["boundary_total"] == pytest.approx(want["boundary"], rel=1e-10)


def test_pluriharmonic_function(ball):
    res = harness.general_identity_check(ball, ScalarField(ball.chart, lambda x: x[0]), Q)
    assert res.lhs == 0.0
    assert res.interior_terms["laplacian_sq"] == 0.0
    assert all(abs(v) < 1e-8 for v in res.boundary_terms.values())


# ------------------------------------------------------------------ independent sympy oracle

X = sp.symbols("x0:4", real=True)
J_STD = sp.Matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])


def _sphere_moment(alpha):
    """∫_{S^3} x^alpha dA (unit sphere)."""
    if any(a % 2 for a in alpha):
        return 0.0
    betas = [(a + 1) / 2 for a in alpha]
    return 2 * math.prod(math.gamma(b) for b in betas) / math.gamma(sum(betas))


def _ball_moment(alpha):
    return _sphere_moment(alpha) / (sum(alpha) + 4)


def _integrate(expr, moment):
    poly = sp.Poly(sp.expand(expr), *X)
    return sum(float(c) * moment(m) for m, c in poly.terms())


def _perm_sign(seq):
    return sp.combinatorics.Permutation([sorted(seq).index(s) for s in seq]).signature()


def sympy_general_terms(coefs: dict) -> dict:
    """Both sides of 4∫|ddbar f|^2 = ∫(Lap f)^2 - ∫_S Jdf ^ dJdf on the unit ball, by exact moments."""
    f = sum(sp.Float(c) * sp.Mul(*[X[a] ** e[a] for a in range(4)]) for e, c in coefs.items())
    grad = [sp.diff(f, x) for x in X]
    jdf = [sum(grad[k] * J_STD[k, i] for k in range(4)) for i in range(4)]  # (J eta)_i = eta_k J[k, i]
    F = [[sp.diff(jdf[j], X[i]) - sp.diff(jdf[i], X[j]) for j in range(4)] for i in range(4)]
    norm = sum(F[i][j] ** 2 for i in range(4) for j in range(i + 1, 4))
    lap = sum(sp.diff(f, x, 2) for x in X)
    # top coefficient of n ^ jdf ^ F with n = x on the unit sphere (complex orientation is +1)
    density = 0
    for i in range(4):
        for j in range(4):
            for k in range(4):
                for l in range(k + 1, 4):
                    idx = (i, j, k, l)
                    if len(set(idx)) == 4:
                        density += _perm_sign(idx) * X[i] * jdf[j] * F[k][l]
    return {"lhs": _integrate(norm, _ball_moment), "laplacian_sq": _integrate(lap ** 2, _ball_moment),
            "boundary": _integrate(density, _sphere_moment)}


def test_sympy_oracle_reproduces_hand_values():
    terms = sympy_general_terms({(2, 0, 0, 0): 1.0, (0, 2, 0, 0): 1.0, (0, 0, 2, 0): 1.0, (0, 0, 0, 2): 1.0})
    assert terms == pytest.approx(oracles.ball_square_norm_terms(1.0), rel=1e-12)


@pytest.mark.parametrize("seed", [100, 101])
def test_general_identity_matches_sympy_oracle(ball, seed):
    f, coefs = harness.random_polynomial(seed, 3, ball.chart)
    want = sympy_general_terms(coefs)
    # the identity itself holds exactly in the independent computation
    assert want["lhs"] == pytest.approx(want["laplacian_sq"] - want["boundary"], rel=1e-10)
    res = harness.general_identity_check(ball, f, Quadrature(resolution=8))
    assert res.lhs == pytest.approx(want["lhs"], rel=1e-10)
    assert res.interior_terms["laplacian_sq"] == pytest.approx(want["laplacian_sq"], rel=1e-10)
    assert res.interior_terms["boundary_total"] == pytest.approx(want["boundary"], rel=1e-10, abs=1e-10)
    assert res.rel_err < 1e-10


def test_polynomial_family_matches_dictionary_form(flat):
    f, coefs = harness.random_polynomial(7, 3, flat.chart)
    g = harness.polynomial_field(flat.chart, coefs)
    pts = flat.chart.sample(8, seed=1, ranges=((-2, 2),) * 4)
    assert np.allclose(f(pts), g(pts), rtol=1e-13)
    assert len(harness.polynomial_exponents(3)) == 35
    zero = np.zeros(4)
    assert np.all(np.isfinite(harness.dJd_field(f, flat.J)(zero)))
