"""Catalog geometries: Taub-NUT, flat C^2, P1 x P1 and the affine Levi-flat example."""

import jax.numpy as jnp
import numpy as np
import pytest

from kahlerverify import catalog, harness
from kahlerverify.errors import CatalogSelfCheckFailed, SingularPoint
from kahlerverify.forms import Form


def test_metric_coefficients_at_r2(tn):
    rows = harness.read_oracles()
    A, B, C = tn.metric_coefficients(2.0)
    assert A == pytest.approx(rows["taub-nut.g-rr-r2-m1"].expected)
    assert B == pytest.approx(rows["taub-nut.g-s1s1-r2-m1"].expected)
    assert C == pytest.approx(3.0)
    G = np.asarray(tn.g(tn.point(2.0)))
    E = np.linalg.inv(np.asarray(catalog.euler_coframe(jnp.asarray(tn.point(2.0)))))  # dual frame
    assert np.allclose(E.T @ G @ E, np.diag([0.75, 4 / 3, 3.0, 3.0]), atol=1e-12)


def test_structure_equations(tn):
    pts = tn.sample(64, seed=21)
    assert catalog.structure_equation_residual(tn.sigma, pts) < 1e-10
    p = pts[0]
    s2, s3 = (Form(1, np.asarray(s(p))) for s in tn.sigma[1:])
    d_s1 = np.asarray((catalog.d(tn.sigma[0]))(p))
    assert np.allclose(d_s1, -2 * np.asarray((s2 ^ s3).comps), atol=1e-10)


def test_conformal_metrics_componentwise(tn):
    pts = tn.sample(8, seed=22)
    G = tn.g(pts)
    r = pts[:, 0][:, None, None]
    assert np.allclose(tn.g_plus(pts), G / (r + 1) ** 2)
    assert np.allclose(tn.g_minus(pts), G / (r - 1) ** 2)


def test_chart_rejects_the_nut_and_poles(tn):
    with pytest.raises(SingularPoint):
        tn.g(tn.point(1.0 + 1e-5))
    with pytest.raises(SingularPoint):
        tn.g(tn.point(2.0, theta=0.0))


def test_bad_mass():
    with pytest.raises(ValueError):
        catalog.taub_nut(0.0)


def test_self_check_failure_is_reported(monkeypatch):
    monkeypatch.setattr(catalog, "STRUCTURE_TOL", -1.0)
    with pytest.raises(CatalogSelfCheckFailed):
        catalog.taub_nut(1.0)


def test_kahler_closedness(tn, tn3):
    for geom in (tn, tn3):
        plus, minus = catalog.kahler_closedness(geom)
        assert plus < 1e-9 and minus < 1e-9


def test_unconformalized_forms_are_not_closed(tn):
    a, b = catalog.unconformal_closedness(tn, tn.point(2.0))
    assert a > 1e-2 and b > 1e-2


def test_wrong_pairing_is_not_closed(tn):
    """(r+m)^-2 g is not Kähler for J+ (the pairing is J± with (r∓m)^-2 g)."""
    from kahlerverify.complexstruct import closedness_residual, kahler_form_fn
    from kahlerverify.fields import TwoFormField
    om = TwoFormField(tn.chart, lambda x: kahler_form_fn(tn.g_plus.fn, tn.J_plus.fn, x))
    assert closedness_residual(tn.g_plus, om, tn.point(2.0)[None, :]) > 1e-2


def test_dlog_identity(tn, tn3):
    for geom in (tn, tn3):
        a, b = catalog.conformal_identity_residual(geom, geom.sample(32, seed=2))
        assert a < 1e-9 and b < 1e-9


def test_omega_halves_self_dual_in_opposite_orientations(tn):
    from kahlerverify.forms import hodge_star
    p = tn.point(2.0)
    G = np.asarray(tn.g(p))
    plus = Form(2, np.asarray(tn.omega_plus(p)))
    minus = Form(2, np.asarray(tn.omega_minus(p)))
    assert np.allclose(hodge_star(G, minus, tn.chart.orientation).comps, minus.comps, atol=1e-12)
    assert np.allclose(hodge_star(G, plus, -tn.chart.orientation).comps, plus.comps, atol=1e-12)
    assert np.allclose(hodge_star(G, plus, tn.chart.orientation).comps, -np.asarray(plus.comps), atol=1e-12)


def test_kahler_pair_mapping(tn):
    assert tn.kahler_pair(1) == (tn.g_minus, tn.J_plus)
    assert tn.kahler_pair(-1) == (tn.g_plus, tn.J_minus)


def test_product_geometry(product):
    pts = product.chart.sample(16, seed=4, ranges=((0.3, 2), (0.3, 2), (-2, 2), (-2, 2)))
    assert np.allclose(product.f_south(product.to_south(pts)), product.f(pts))
    V = product.level_set(2.0)
    assert np.max(np.abs(V.rho(V.sample(8)))) < 1e-12
    assert "Gauss curvature 1" in product.normalization


def test_catalog_lookup():
    assert isinstance(catalog.get("affine-levi-flat", alpha=0.5), catalog.AffineLeviFlat)
    with pytest.raises(KeyError):
        catalog.get("eguchi-hanson")
    assert set(catalog.CATALOG) == {"taub-nut", "p1xp1", "affine-levi-flat"}
