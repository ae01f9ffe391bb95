"""Hypersurfaces, unit normals, Levi forms, classification and boundary densities."""

import jax.numpy as jnp
import numpy as np
import pytest

from kahlerverify import catalog, harness, levi, oracles
from kahlerverify.errors import DegenerateDefiningFunction, NotLevelSet
from kahlerverify.fields import ScalarField
from kahlerverify.levi import Classification, Hypersurface, classify, classify_values


def test_unit_normal_of_sphere(flat):
    V = catalog.sphere(flat, 2.0)
    p = np.array([1.2, 0.0, 1.6, 0.0])
    assert np.allclose(levi.unit_normal(V, flat.g, p).comps, p / 2.0)


def test_unit_normal_of_slab(flat):
    V = catalog.affine_levi_flat(0.7, validate=False).hypersurface
    assert np.allclose(levi.unit_normal(V, flat.g, np.array([0.1, 0.7, -1, 2])).comps, [0, 1, 0, 0])


def test_unit_normal_of_taub_nut_level_set(tn):
    """{r = 2m}: the unit conormal is sqrt(g_rr) dr = sqrt(3)/2 dr."""
    oracle = harness.read_oracles()["taub-nut.unit-normal-dr-r2-m1"]
    V = Hypersurface(tn.chart, ScalarField(tn.chart, lambda x: x[0] - 2.0), 1, name="r=2")
    n = levi.unit_normal(V, tn.g, tn.point(2.0))
    assert np.allclose(n.comps, [oracle.expected, 0, 0, 0], atol=oracle.tolerance)
    assert oracle.expected == pytest.approx(np.sqrt(3) / 2)


def test_point_off_surface(flat):
    with pytest.raises(NotLevelSet):
        levi.unit_normal(catalog.sphere(flat, 1.0), flat.g, np.array([2.0, 0, 0, 0]))


def test_degenerate_defining_function(flat):
    rho = ScalarField(flat.chart, lambda x: (x[0] - 1.0) ** 2)
    V = Hypersurface(flat.chart, rho, 1)
    with pytest.raises(DegenerateDefiningFunction):
        levi.unit_normal(V, flat.g, np.array([1.0, 0, 0, 0]))


@pytest.mark.parametrize("R", [1.0, 2.0, 4.0])
def test_sphere_levi_value_oracle(flat, R):
    V = catalog.sphere(flat, R)
    pts = V.sample(32, seed=2)
    vals, _ = levi.levi_values(V, flat.g, flat.J, pts)
    assert np.allclose(vals, oracles.sphere_levi_value(R), rtol=1e-10)
    one = levi.levi_form(V, flat.g, flat.J, pts[0])
    assert one.value == pytest.approx(1.0 / R, rel=1e-10)
    # restricted to span{eta, J eta} the Levi form is (1/R) times the area form
    assert one.restricted[0, 1] == pytest.approx(-1.0 / R, rel=1e-10)


def test_sphere_classification_and_flip(flat):
    V = catalog.sphere(flat, 2.0)
    out = classify(V, flat.g, flat.J)
    assert out.classification == Classification.STRICTLY_PSEUDOCONVEX
    flipped = classify(V.flipped(), flat.g, flat.J)
    assert flipped.classification == Classification.STRICTLY_PSEUDOCONCAVE
    assert np.allclose(flipped.values, -out.values)
    assert out.classification.mirrored() == flipped.classification


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_affine_levi_flat(alpha):
    geom = catalog.affine_levi_flat(alpha)
    out = classify(geom.hypersurface, geom.flat.g, geom.flat.J)
    assert out.classification == Classification.LEVI_FLAT
    assert np.max(np.abs(out.values)) < 1e-8


def test_affine_second_chart_levi_flat():
    geom = catalog.affine_levi_flat(1.0)
    out = classify(geom.second, geom.second_flat.g, geom.second_flat.J)
    assert out.classification == Classification.LEVI_FLAT
    # the two realizations describe the same hypersurface on the overlap
    pts = geom.hypersurface.sample(16, seed=1)
    pts = pts[np.abs(pts[:, 0]) > 0.1]
    assert np.max(np.abs(geom.second.rho(geom.first_to_second(pts)))) < 1e-10


@pytest.mark.parametrize("c", [0.5, 1.0, 2.0])
def test_product_level_sets_levi_flat(product, c):
    out = classify(product.level_set(c), product.g, product.J)
    assert out.classification == Classification.LEVI_FLAT
    assert np.max(np.abs(out.values)) < 1e-8


def test_classification_rules():
    assert classify_values([1e-13, -1e-13], 1e-12) == Classification.LEVI_FLAT
    assert classify_values([1.0, 2.0], 1e-12) == Classification.STRICTLY_PSEUDOCONVEX
    assert classify_values([1.0, 0.0], 1e-12) == Classification.PSEUDOCONVEX
    assert classify_values([-1.0, -2.0], 1e-12) == Classification.STRICTLY_PSEUDOCONCAVE
    assert classify_values([-1.0, 0.0], 1e-12) == Classification.PSEUDOCONCAVE
    assert classify_values([-1.0, 1.0], 1e-12) == Classification.INDEFINITE
    for c in Classification:
        assert c.mirrored().mirrored() == c


def test_classification_needs_enough_samples(flat):
    with pytest.raises(ValueError):
        classify(catalog.sphere(flat, 1.0), flat.g, flat.J, sample_count=4)


def test_boundary_density_annulus_oracle(annulus12):
    f = harness.annulus_harmonic(1.0, 2.0, annulus12.chart)
    outer, inner = annulus12.boundary
    c = oracles.annulus_constant(1.0, 2.0)
    for V, R, sign in ((outer, 2.0, 1), (inner, 1.0, -1)):
        pts = V.sample(8, seed=3)
        vals = levi.boundary_density(f, V, annulus12.g, annulus12.J, pts)
        expected = 4 * c ** 2 * R ** -6 * sign / R  # |df|^2 L(J eta, eta)
        assert np.allclose(vals, expected, rtol=1e-6)


def test_boundary_density_trivial_cases(flat, product):
    V = catalog.affine_levi_flat(0.0, validate=False).hypersurface
    f = ScalarField(flat.chart, lambda x: 3.0 * x[1])
    assert np.allclose(levi.boundary_density(f, V, flat.g, flat.J, V.sample(4)), 0.0, atol=1e-14)
    const = ScalarField(flat.chart, lambda x: 1.0 + 0 * x[0])
    S = catalog.sphere(flat, 1.0)
    assert np.all(levi.boundary_density(const, S, flat.g, flat.J, S.sample(4)) == 0.0)
    Vp = product.level_set(1.0)
    vals = levi.boundary_density(product.f, Vp, product.g, product.J, Vp.sample(4, seed=2))
    assert np.max(np.abs(vals)) < 1e-10


def test_boundary_density_requires_level_set(flat):
    f = ScalarField(flat.chart, lambda x: x[0])
    S = catalog.sphere(flat, 1.0)
    with pytest.raises(NotLevelSet):
        levi.boundary_density(f, S, flat.g, flat.J, S.sample(4))
