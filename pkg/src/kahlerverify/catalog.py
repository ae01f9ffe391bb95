"""Closed-form example geometries.

* ``taub_nut(m)``: the Taub-NUT metric in Euler-angle coordinates
  ``(r, theta, phi, psi)`` with its complex structures ``J_f``, ``J+``,
  ``J-`` and the conformally Kähler metrics ``g+ = (r+m)^-2 g`` and
  ``g- = (r-m)^-2 g``.

  With ``d s^i = -eps_ijk s^j ^ s^k`` the half of the Weyl tensor that
  vanishes is the one that is self-dual for ``dr ^ s1 ^ s2 ^ s3``; the chart
  is therefore oriented by ``-dr ^ s1 ^ s2 ^ s3``, in which ``W- = 0``.
  ``d(g(J±., .)) = d log (r ∓ m)^2 ^ g(J±., .)``, so ``J+`` is Kähler for
  ``(r-m)^-2 g = g-`` and ``J-`` for ``(r+m)^-2 g = g+``.
* ``flat_c2()``: flat C^2 with the standard structure.
* ``product_geometry()``: P^1 x P^1 with the product round metric, in
  stereographic coordinates, and the harmonic function ``log|w1|``.
* ``affine_levi_flat(alpha)``: the hypersurfaces ``{Im z1 = alpha}`` and,
  in a second affine chart of P^2, ``{Im(1/z0) = alpha}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from . import forms
from .complexstruct import (AlmostComplexStructure, KahlerTriple, closedness_residual,
                            kahler_form_fn, standard_structure)
from .errors import CatalogSelfCheckFailed, InvalidStructureFunction
from .fields import (Chart, MetricField, OneFormField, ScalarField, TwoFormField, d,
                     euclidean_chart, flat_metric, laplacian_field)
from .levi import Hypersurface, classify
from .quadrature import Box

SELF_CHECK_POINTS = 256
STRUCTURE_TOL = 1e-10


def euler_coframe(x):
    """Rows ``dr, s1, s2, s3`` in coordinates ``(r, theta, phi, psi)``.

    Normalised so that ``d s^i = -eps_ijk s^j ^ s^k`` (``d s1 = -2 s2 ^ s3``);
    the round unit 3-sphere is ``s1^2 + s2^2 + s3^2``.
    """
    _, th, _, ps = x[0], x[1], x[2], x[3]
    zero = 0.0 * th
    return jnp.array([
        [1.0 + zero, zero, zero, zero],
        [zero, zero, 0.5 * jnp.cos(th), 0.5 + zero],
        [zero, 0.5 * jnp.sin(ps), -0.5 * jnp.sin(th) * jnp.cos(ps), zero],
        [zero, 0.5 * jnp.cos(ps), 0.5 * jnp.sin(th) * jnp.sin(ps), zero],
    ])


def _outer_sum(terms):
    return sum(c * jnp.outer(v, w) for c, v, w in terms)


@dataclass(frozen=True, eq=False)
class TaubNutGeometry:
    m: float
    chart: Chart
    sigma: tuple
    g: MetricField
    g_plus: MetricField
    g_minus: MetricField
    J_plus: AlmostComplexStructure
    J_minus: AlmostComplexStructure
    omega_plus: TwoFormField
    omega_minus: TwoFormField

    @property
    def sample_ranges(self):
        m = self.m
        return ((1.05 * m, 10.0 * m), (0.1, np.pi - 0.1), (0.0, 2 * np.pi), (0.0, 4 * np.pi))

    def sample(self, n: int, seed: int = 0, r_range=None) -> np.ndarray:
        ranges = list(self.sample_ranges)
        if r_range is not None:
            ranges[0] = tuple(r_range)
        return self.chart.sample(n, seed, ranges)

    def point(self, r: float, theta: float = 1.1, phi: float = 0.7, psi: float = 2.3) -> np.ndarray:
        return np.array([r, theta, phi, psi], dtype=float)

    def metric_coefficients(self, r):
        """``(A, B, C)`` with ``g = A dr^2 + B s1^2 + C (s2^2 + s3^2)``."""
        m = self.m
        return 0.25 * (r + m) / (r - m), 4 * m ** 2 * (r - m) / (r + m), r ** 2 - m ** 2

    def unit_coframe(self, metric: MetricField) -> Callable:
        """``x -> rows eta^a = |theta^a|^-1 theta^a`` for ``theta = (dr, s1, s2, s3)``.

        Every catalog metric is diagonal in this basis, so the result is
        orthonormal.  It has the orientation of ``dr ^ s1 ^ s2 ^ s3``, opposite
        to the chart's; curvature routines flip ``eta^3`` as needed.
        """
        def fn(x):
            x = np.asarray(x, dtype=float)
            Th = np.asarray(euler_coframe(jnp.asarray(x)))
            gi = np.linalg.inv(np.asarray(metric(x)))
            sizes = np.sqrt(np.einsum("ai,ij,aj->a", Th, gi, Th))
            return Th / sizes[:, None]

        return fn

    def kahler_pair(self, sign: int) -> tuple[MetricField, AlmostComplexStructure]:
        """``(r ∓ m)^-2 g`` together with ``J±`` (``sign = ±1``), which is Kähler."""
        return (self.g_minus, self.J_plus) if sign > 0 else (self.g_plus, self.J_minus)

    def kahler_triple(self, sign: int) -> KahlerTriple:
        return KahlerTriple.from_metric(*self.kahler_pair(sign), kahler=True)


def _taub_nut_metric(m: float):
    def fn(x):
        r = x[0]
        Th = euler_coframe(x)
        A = 0.25 * (r + m) / (r - m)
        B = 4 * m ** 2 * (r - m) / (r + m)
        C = r ** 2 - m ** 2
        return Th.T @ jnp.diag(jnp.array([A, B, C, C])) @ Th
    return fn


def taub_nut_chart(m: float) -> Chart:
    return Chart(
        "taub-nut",
        ranges=((m, 1000.0 * m), (0.0, np.pi), (0.0, 2 * np.pi), (0.0, 4 * np.pi)),
        periodic=(False, False, True, True),
        singular_loci=((0, m), (1, 0.0), (1, np.pi)),
        orientation=-1,
        scale=m,
    )


def j_f_fn(f: Callable) -> Callable:
    """``J_f = -f d_r ⊗ s1 + (1/f) e1 ⊗ dr - e2 ⊗ s3 + e3 ⊗ s2`` in coordinates."""
    def fn(x):
        Th = euler_coframe(x)
        E = jnp.linalg.inv(Th)  # columns d_r, e1, e2, e3
        fr = f(x[0])
        return _outer_sum([(-fr, E[:, 0], Th[1]), (1.0 / fr, E[:, 1], Th[0]),
                           (-1.0, E[:, 2], Th[3]), (1.0, E[:, 3], Th[2])])
    return fn


def j_f(geometry: TaubNutGeometry, f: Callable, name: str = "J_f") -> AlmostComplexStructure:
    """The structure ``J_f`` for a function ``f(r)``; ``f`` must not vanish on the sampled range."""
    lo, hi = geometry.sample_ranges[0]
    rs = np.linspace(lo, hi, 257)
    vals = np.asarray(jax.vmap(f)(jnp.asarray(rs)))
    if (np.any(~np.isfinite(vals)) or np.min(np.abs(vals)) < 1e-12 * max(1.0, np.max(np.abs(vals)))
            or np.any(np.sign(vals[1:]) != np.sign(vals[:-1]))):
        raise InvalidStructureFunction("f(r) vanishes or blows up on the sampled range")
    return AlmostComplexStructure(geometry.chart, j_f_fn(f), name=name)


def deformed_j_f(geometry: TaubNutGeometry, f: Callable, scale: Callable) -> AlmostComplexStructure:
    """``J_f`` with its (e2, e3) block conjugated by ``diag(1, scale(r))``.

    ``e2 ⊗ s3`` is multiplied by ``scale`` and ``e3 ⊗ s2`` divided by it, so
    ``J^2 = -Id`` still holds but the structure is no longer integrable.
    """
    def fn(x):
        Th = euler_coframe(x)
        E = jnp.linalg.inv(Th)
        fr, lam = f(x[0]), scale(x[0])
        return _outer_sum([(-fr, E[:, 0], Th[1]), (1.0 / fr, E[:, 1], Th[0]),
                           (-lam, E[:, 2], Th[3]), (1.0 / lam, E[:, 3], Th[2])])
    return AlmostComplexStructure(geometry.chart, fn, name="J_f deformed")


def structure_equation_residual(sigma, points) -> float:
    """``max |d s^i + eps_ijk s^j ^ s^k|`` over ``points``."""
    worst = 0.0
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        res = d(sigma[i]) + 2.0 * (sigma[j] ^ sigma[k])
        worst = max(worst, float(np.max(np.abs(res(points)))))
    return worst


def taub_nut(m: float = 1.0, validate: bool = True) -> TaubNutGeometry:
    if not m > 0:
        raise ValueError("the Taub-NUT mass parameter must be positive")
    m = float(m)
    chart = taub_nut_chart(m)
    sigma = tuple(OneFormField(chart, (lambda x, a=a: euler_coframe(x)[a]), name=f"sigma{a}")
                  for a in (1, 2, 3))
    g = MetricField(chart, _taub_nut_metric(m), name="taub-nut")
    f_plus = lambda r: 4 * m * (r - m) / (r + m)  # noqa: E731
    J_plus = AlmostComplexStructure(chart, j_f_fn(f_plus), name="J+")
    J_minus = AlmostComplexStructure(chart, j_f_fn(lambda r: -f_plus(r)), name="J-")
    omega_plus = TwoFormField(chart, lambda x: kahler_form_fn(g.fn, J_plus.fn, x), name="g(J+.,.)")
    omega_minus = TwoFormField(chart, lambda x: kahler_form_fn(g.fn, J_minus.fn, x), name="g(J-.,.)")
    r_fn = lambda x: x[0]  # noqa: E731
    g_plus = MetricField(chart, lambda x: (r_fn(x) + m) ** -2 * g.fn(x), name="g+")
    g_minus = MetricField(chart, lambda x: (r_fn(x) - m) ** -2 * g.fn(x), name="g-")
    geom = TaubNutGeometry(m, chart, sigma, g, g_plus, g_minus, J_plus, J_minus,
                           omega_plus, omega_minus)
    if validate:
        pts = geom.sample(SELF_CHECK_POINTS, seed=11)
        failures = {}
        res = structure_equation_residual(sigma, pts)
        if res > STRUCTURE_TOL:
            failures["structure equations"] = res
        for J in (J_plus, J_minus):
            for label, val in (("J^2", J.square_residual(pts)),
                               ("compatibility", J.compatibility_residual(g, pts))):
                if val > STRUCTURE_TOL:
                    failures[f"{J.name} {label}"] = val
        if failures:
            raise CatalogSelfCheckFailed(f"Taub-NUT self-check failed: {failures}")
    return geom


def kahler_closedness(geometry: TaubNutGeometry, samples=None) -> tuple[float, float]:
    """``sup |d((r ∓ m)^-2 g(J±., .))|`` measured in ``(r ∓ m)^-2 g``."""
    pts = geometry.sample(SELF_CHECK_POINTS, seed=3) if samples is None else np.atleast_2d(samples)
    out = []
    for gm, J in (geometry.kahler_pair(1), geometry.kahler_pair(-1)):
        omega = TwoFormField(geometry.chart, lambda x, gm=gm, J=J: kahler_form_fn(gm.fn, J.fn, x))
        out.append(closedness_residual(gm, omega, pts))
    return out[0], out[1]


def unconformal_closedness(geometry: TaubNutGeometry, samples) -> tuple[float, float]:
    """``sup |d(g(J±., .))|_g`` for the original metric (not closed)."""
    pts = np.atleast_2d(samples)
    return (closedness_residual(geometry.g, geometry.omega_plus, pts),
            closedness_residual(geometry.g, geometry.omega_minus, pts))


def conformal_identity_residual(geometry: TaubNutGeometry, samples) -> tuple[float, float]:
    """``sup |d omega± - d log (r ∓ m)^2 ^ omega±|_g``."""
    pts = np.atleast_2d(samples)
    m = geometry.m
    out = []
    for sign, omega in ((1, geometry.omega_plus), (-1, geometry.omega_minus)):
        logf = ScalarField(geometry.chart, lambda x, s=sign: jnp.log((x[0] - s * m) ** 2))
        res = d(omega) - (d(logf) ^ omega)
        norms = jax.jit(jax.vmap(lambda x: forms.norm_sq(geometry.g.fn(x), res.form_fn(x))))
        out.append(float(np.sqrt(np.max(np.asarray(norms(pts))))))
    return out[0], out[1]


@dataclass(frozen=True, eq=False)
class FlatC2:
    chart: Chart
    g: MetricField
    J: AlmostComplexStructure


def flat_c2(half_width: float = 10.0) -> FlatC2:
    """``C^2`` with ``z1 = x0 + i x1``, ``z2 = x2 + i x3``."""
    chart = euclidean_chart("C2", half_width)
    return FlatC2(chart, flat_metric(chart), standard_structure(chart))


def sphere_patch(R: float) -> Callable:
    """Hopf coordinates ``(t, a, b) -> (R cos t e^{ia}, R sin t e^{ib})``."""
    def patch(u):
        t, a, b = u[0], u[1], u[2]
        return jnp.array([R * jnp.cos(t) * jnp.cos(a), R * jnp.cos(t) * jnp.sin(a),
                          R * jnp.sin(t) * jnp.cos(b), R * jnp.sin(t) * jnp.sin(b)])
    return patch


SPHERE_BOX = Box(((0.0, np.pi / 2), (0.0, 2 * np.pi), (0.0, 2 * np.pi)), (False, True, True), name="S3")


def sphere(flat: FlatC2, R: float, normal_sign: int = 1) -> Hypersurface:
    """``{|z| = R}``; ``normal_sign=+1`` is the outward normal."""
    rho = ScalarField(flat.chart, lambda x: jnp.sqrt(x @ x) - R, name=f"|z|-{R}")
    return Hypersurface(flat.chart, rho, normal_sign, sphere_patch(R), SPHERE_BOX, name=f"S3({R})")


@dataclass(frozen=True, eq=False)
class ProductGeometry:
    """P^1 x P^1 with the product of Gauss-curvature-1 round metrics.

    The north chart uses stereographic coordinates ``w1 = x0 + i x1``,
    ``w2 = x2 + i x3``; the south chart replaces ``w1`` by ``1/w1``.  The
    points ``p, q`` of the first factor are normalised to ``0`` and ``inf``, so
    the harmonic function with poles there is ``f = log|w1|`` (``-log|w1'|``
    in the south chart).
    """

    chart: Chart
    south_chart: Chart
    g: MetricField
    g_south: MetricField
    J: AlmostComplexStructure
    J_south: AlmostComplexStructure
    f: ScalarField
    f_south: ScalarField
    normalization: str = "round metrics of Gauss curvature 1 on each factor; p -> 0, q -> inf"

    def to_south(self, x):
        x = np.asarray(x, dtype=float)
        w = x[..., 0] + 1j * x[..., 1]
        w_inv = 1.0 / w
        return np.stack([w_inv.real, w_inv.imag, x[..., 2], x[..., 3]], axis=-1)

    def level_set(self, c: float, normal_sign: int = 1, half_width: float = 2.0) -> Hypersurface:
        """``{|w1| = c}`` with a bounded patch in the ``w2`` plane."""
        rho = ScalarField(self.chart, lambda x: self.f.fn(x) - jnp.log(c))

        def patch(u):
            return jnp.array([c * jnp.cos(u[0]), c * jnp.sin(u[0]), u[1], u[2]])

        box = Box(((0.0, 2 * np.pi), (-half_width, half_width), (-half_width, half_width)),
                  (True, False, False), name=f"|w1|={c}")
        return Hypersurface(self.chart, rho, normal_sign, patch, box, name=f"|w1|={c}")


def _product_metric(x):
    a = 4.0 / (1.0 + x[0] ** 2 + x[1] ** 2) ** 2
    b = 4.0 / (1.0 + x[2] ** 2 + x[3] ** 2) ** 2
    return jnp.diag(jnp.array([a, a, b, b]))


def product_geometry(validate: bool = True) -> ProductGeometry:
    charts = [Chart(name, ((-20.0, 20.0),) * 4, singular_loci=(((0, 1), (0.0, 0.0)),))
              for name in ("P1xP1/north", "P1xP1/south")]
    g, g_s = (MetricField(c, _product_metric, name="product round") for c in charts)
    J, J_s = (standard_structure(c) for c in charts)
    f = ScalarField(charts[0], lambda x: 0.5 * jnp.log(x[0] ** 2 + x[1] ** 2), name="log|w1|")
    f_s = ScalarField(charts[1], lambda x: -0.5 * jnp.log(x[0] ** 2 + x[1] ** 2), name="-log|w1'|")
    geom = ProductGeometry(charts[0], charts[1], g, g_s, J, J_s, f, f_s)
    if validate:
        ranges = ((0.2, 3.0), (0.2, 3.0), (-3.0, 3.0), (-3.0, 3.0))
        pts = charts[0].sample(SELF_CHECK_POINTS, seed=5, ranges=ranges)
        lap = float(np.max(np.abs(laplacian_field(g, f)(pts))))
        lap_s = float(np.max(np.abs(laplacian_field(g_s, f_s)(geom.to_south(pts)))))
        chart_mismatch = float(np.max(np.abs(f_s(geom.to_south(pts)) - f(pts))))
        failures = {k: v for k, v in (("harmonic", lap), ("harmonic south", lap_s),
                                      ("chart transition", chart_mismatch)) if v > 1e-9}
        report = classify(geom.level_set(1.0), g, J, sample_count=64)
        if report.classification != "LeviFlat":
            failures["Levi-flat |w1|=1"] = report.classification
        if failures:
            raise CatalogSelfCheckFailed(f"P1xP1 self-check failed: {failures}")
    return geom


@dataclass(frozen=True, eq=False)
class AffineLeviFlat:
    """``{Im z1 = alpha}`` in C^2, plus ``{Im(1/z0) = alpha}`` in the chart ``[z0; 1; z2]``."""

    alpha: float
    flat: FlatC2
    hypersurface: Hypersurface
    second_flat: FlatC2
    second: Hypersurface

    def first_to_second(self, x):
        """``(z1, z2) -> (z0, z2') = (1/z1, z2/z1)`` between affine charts of P^2."""
        x = np.asarray(x, dtype=float)
        z1 = x[..., 0] + 1j * x[..., 1]
        z2 = x[..., 2] + 1j * x[..., 3]
        z0, w = 1.0 / z1, z2 / z1
        return np.stack([z0.real, z0.imag, w.real, w.imag], axis=-1)


def affine_levi_flat(alpha: float = 0.0, half_width: float = 2.0, validate: bool = True) -> AffineLeviFlat:
    flat = flat_c2()
    rho = ScalarField(flat.chart, lambda x: x[1] - alpha, name=f"Im z1 - {alpha}")
    box = Box(((-half_width, half_width),) * 3, (False,) * 3, name="slab")
    V = Hypersurface(flat.chart, rho, 1,
                     lambda u: jnp.array([u[0], alpha + 0.0 * u[0], u[1], u[2]]), box,
                     name=f"Im z1 = {alpha}")
    chart2 = euclidean_chart("P2/[z0;1;z2]", 10.0, singular_loci=(((0, 1), (0.0, 0.0)),))
    flat2 = FlatC2(chart2, flat_metric(chart2), standard_structure(chart2))
    rho2 = ScalarField(chart2, lambda x: -x[1] / (x[0] ** 2 + x[1] ** 2) - alpha,
                       name=f"Im(1/z0) - {alpha}")

    def patch2(u):
        # 1/z0 = u0 + i alpha
        den = u[0] ** 2 + alpha ** 2
        return jnp.array([u[0] / den, -alpha / den, u[1], u[2]])

    box2 = Box(((-3.0, 3.0), (-half_width, half_width), (-half_width, half_width)),
               (False,) * 3, name="Im(1/z0) patch")
    V2 = Hypersurface(chart2, rho2, 1, patch2, box2, name=f"Im(1/z0) = {alpha}")
    geom = AffineLeviFlat(alpha, flat, V, flat2, V2)
    if validate:
        failures = {}
        checks = [("Im z1", V, flat)]
        if alpha != 0.0:
            checks.append(("Im 1/z0", V2, flat2))
        for label, surf, fl in checks:
            report = classify(surf, fl.g, fl.J, sample_count=64)
            if report.classification != "LeviFlat":
                failures[label] = report.classification
        if failures:
            raise CatalogSelfCheckFailed(f"affine Levi-flat self-check failed: {failures}")
    return geom


CATALOG = {
    "taub-nut": taub_nut,
    "p1xp1": product_geometry,
    "affine-levi-flat": affine_levi_flat,
}


def get(name: str, **kwargs):
    """Construct a catalog geometry by its string identifier."""
    try:
        return CATALOG[name](**kwargs)
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; choose from {sorted(CATALOG)}") from None
