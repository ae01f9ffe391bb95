"""Integration-by-parts identities on compact domains in flat C^2.

Two identities are checked, both for the unit cutoff ``phi = 1``:

* general:   ``4 ∫ |ddbar f|^2 = ∫ (Lap f)^2 - ∫_∂ Jdf ^ dJdf``  (any ``f``)
* harmonic:  ``2 ∫ |ddbar f|^2 = -∫_∂ L(*(Jdf ^ df)) dA``       (``Lap f = 0``,
  ``f`` locally constant on the boundary)

with ``|ddbar f|^2 = |dJdf|^2 / 4``.  Domains are balls and spherical shells
parameterised by Hopf coordinates ``(r, t, a, b)`` with
``z1 = r cos t e^{ia}``, ``z2 = r sin t e^{ib}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np
from scipy.stats import qmc

from . import forms
from .catalog import FlatC2, flat_c2, sphere_patch, SPHERE_BOX
from .complexstruct import complex_orientation, dJd_field, J_of
from .errors import InvalidAnnulus, NotHarmonic
from .fields import ScalarField, d, laplacian_fn
from .forms import Form
from .levi import EPS_DEF, Hypersurface, boundary_density_fn, boundary_density_routes, normal_fn
from .quadrature import Box, Integral, Quadrature, integrate_domain, integrate_hypersurface

REL_FLOOR = 1e-12
HARMONIC_TOL = 1e-8
ROUTE_TOL = 1e-8


def hopf_map(u):
    r, t, a, b = u[0], u[1], u[2], u[3]
    return jnp.array([r * jnp.cos(t) * jnp.cos(a), r * jnp.cos(t) * jnp.sin(a),
                      r * jnp.sin(t) * jnp.cos(b), r * jnp.sin(t) * jnp.sin(b)])


@dataclass(frozen=True, eq=False)
class BoundedDomain:
    """``inner <= |z| <= outer`` in flat C^2 (a ball when ``inner == 0``)."""

    name: str
    geometry: FlatC2
    region: Box
    boundary: tuple
    inner: float
    outer: float

    @property
    def chart(self):
        return self.geometry.chart

    @property
    def g(self):
        return self.geometry.g

    @property
    def J(self):
        return self.geometry.J

    def contains(self, x) -> np.ndarray:
        rad = np.linalg.norm(np.atleast_2d(x), axis=1)
        return (rad >= self.inner) & (rad <= self.outer)

    def sample_interior(self, n: int, seed: int = 0) -> np.ndarray:
        box = np.asarray(self.region.ranges, dtype=float)
        u = qmc.Halton(d=4, scramble=True, seed=seed).random(n)
        u = box[:, 0] + u * (box[:, 1] - box[:, 0])
        return np.asarray(jax.vmap(self.region.map)(u))

    def validate(self, n: int = 32, step: float = 1e-4) -> None:
        """Boundary defining functions are nondegenerate and normals point outward."""
        for V in self.boundary:
            pts = V.sample(n, seed=1)
            grads = np.asarray(d(V.rho)(pts))
            if np.min(np.linalg.norm(grads, axis=1)) <= EPS_DEF:
                raise ValueError(f"defining function of {V.name} degenerates on its patch")
            normals = np.asarray(jax.vmap(normal_fn(V, self.g))(pts))
            if not (np.all(self.contains(pts - step * normals))
                    and not np.any(self.contains(pts + step * normals))):
                raise ValueError(f"normal of {V.name} is not outward for {self.name}")


def _sphere(flat: FlatC2, R: float, outward_from_origin: bool) -> Hypersurface:
    rho = ScalarField(flat.chart, lambda x: jnp.sqrt(x @ x) - R, name=f"|z|-{R}")
    return Hypersurface(flat.chart, rho, 1 if outward_from_origin else -1,
                        sphere_patch(R), SPHERE_BOX, name=f"|z|={R:g}")


def ball_domain(R: float = 1.0) -> BoundedDomain:
    flat = flat_c2(half_width=max(10.0, 2 * R))
    region = Box(((0.0, R), (0.0, np.pi / 2), (0.0, 2 * np.pi), (0.0, 2 * np.pi)),
                 (False, False, True, True), hopf_map, name=f"ball({R:g})")
    dom = BoundedDomain(f"ball({R:g})", flat, region, (_sphere(flat, R, True),), 0.0, R)
    dom.validate()
    return dom


def annulus_domain(a: float, b: float) -> BoundedDomain:
    if not 0 < a < b:
        raise InvalidAnnulus(f"need 0 < a < b, got a={a}, b={b}")
    flat = flat_c2(half_width=max(10.0, 2 * b))
    region = Box(((a, b), (0.0, np.pi / 2), (0.0, 2 * np.pi), (0.0, 2 * np.pi)),
                 (False, False, True, True), hopf_map, name=f"annulus({a:g},{b:g})")
    dom = BoundedDomain(f"annulus({a:g},{b:g})", flat, region,
                        (_sphere(flat, b, True), _sphere(flat, a, False)), a, b)
    dom.validate()
    return dom


def annulus_harmonic(a: float, b: float, chart=None) -> ScalarField:
    """``(|z|^-2 - b^-2)/(a^-2 - b^-2)``: harmonic, 1 on ``|z| = a``, 0 on ``|z| = b``."""
    if not 0 < a < b:
        raise InvalidAnnulus(f"need 0 < a < b, got a={a}, b={b}")
    chart = flat_c2(half_width=max(10.0, 2 * b)).chart if chart is None else chart
    den = a ** -2 - b ** -2
    return ScalarField(chart, lambda x: (1.0 / (x @ x) - b ** -2) / den, name=f"h[{a:g},{b:g}]")


def polynomial_field(chart, coefficients: dict, name: str = "poly") -> ScalarField:
    """Scalar field ``sum c_e x^e`` from ``{exponent tuple: coefficient}``."""
    terms = [(float(c), tuple(int(k) for k in e)) for e, c in coefficients.items()]

    def fn(x):
        total = 0.0 * x[0]
        for c, e in terms:
            mono = 1.0
            for axis, power in enumerate(e):
                if power:
                    mono = mono * x[axis] ** power  # integer powers keep derivatives finite at 0
            total = total + c * mono
        return total

    return ScalarField(chart, fn, name=name)


def polynomial_exponents(degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree ``<= degree`` in four variables, in a fixed order."""
    return [e for e in itertools.product(range(degree + 1), repeat=4) if sum(e) <= degree]


def random_coefficients(seed: int, degree: int = 3) -> np.ndarray:
    """Standard-normal coefficients aligned with ``polynomial_exponents(degree)``."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal(len(polynomial_exponents(degree)))


def polynomial_family(chart, degree: int = 3) -> Callable:
    """``c -> ScalarField`` for ``sum c_e x^e``; ``c`` may be a traced array, so a
    whole family of polynomials shares one compiled evaluation."""
    exps = np.asarray(polynomial_exponents(degree))

    def make(c) -> ScalarField:
        def fn(x):
            # tables of static integer powers keep derivatives finite at x = 0
            tables = [jnp.stack([x[a] ** k for k in range(degree + 1)]) for a in range(4)]
            monos = jnp.prod(jnp.stack([tables[a][exps[:, a]] for a in range(4)]), axis=0)
            return jnp.dot(c, monos)

        return ScalarField(chart, fn, name="poly")

    return make


def random_polynomial(seed: int, degree: int = 3, chart=None) -> tuple[ScalarField, dict]:
    """Polynomial of total degree ``<= degree`` with standard-normal coefficients."""
    exps = polynomial_exponents(degree)
    coefs = {e: float(c) for e, c in zip(exps, random_coefficients(seed, degree))}
    chart = flat_c2().chart if chart is None else chart
    return polynomial_field(chart, coefs, name=f"poly[{seed}]"), coefs


def relative_error(lhs: float, rhs: float, floor: float = REL_FLOOR) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), floor)


@dataclass(frozen=True)
class IbpResult:
    """Both sides of an identity; ``level_rel_errs[k]`` compares the sides
    computed on refinement level ``k`` alone (level 0 = default grid)."""

    lhs: float
    rhs: float
    rel_err: float
    lhs_error: float
    rhs_error: float
    boundary_terms: dict = field(default_factory=dict)
    interior_terms: dict = field(default_factory=dict)
    quadrature: dict = field(default_factory=dict)
    level_rel_errs: tuple = ()


def _level_rel_errs(lhs: Integral, rhs_levels) -> tuple:
    return tuple(relative_error(a, b) for a, b in zip(lhs.levels, rhs_levels))


def _qmeta(q: Quadrature) -> dict:
    return {"scheme": q.scheme, "resolution": q.resolution, "periodic_resolution": q.periodic_nodes,
            "refinement_levels": q.refinement_levels}


def _outward_density(domain: BoundedDomain, V: Hypersurface, beta_fn: Callable, o: int) -> Callable:
    """``x -> *(n ^ beta)``: the 3-form ``beta`` pulled back to ``V`` per unit area."""
    n_fn = normal_fn(V, domain.g)

    def fn(x):
        top = forms.wedge(Form(1, n_fn(x)), Form(3, beta_fn(x)))
        return forms.hodge_star(domain.g.fn(x), top, o).comps[0]

    return fn


def general_identity_check(domain: BoundedDomain, f: ScalarField, q: Quadrature | None = None) -> IbpResult:
    """``4∫|ddbar f|^2`` against ``∫(Lap f)^2 - ∫_∂ Jdf ^ dJdf``."""
    q = Quadrature() if q is None else q
    g, J = domain.g, domain.J
    o = complex_orientation(g, J, domain.sample_interior(1)[0])
    ddf = dJd_field(f, J)
    jdf = J_of(J, d(f))
    lhs = integrate_domain(g, lambda x: forms.norm_sq(g.fn(x), ddf.form_fn(x)), domain.region, q)
    lap = integrate_domain(g, lambda x: laplacian_fn(g.fn, f.fn, x) ** 2, domain.region, q)
    beta = lambda x: forms.wedge(jdf.form_fn(x), ddf.form_fn(x)).comps  # noqa: E731
    bnd = {V.name: integrate_hypersurface(g, _outward_density(domain, V, beta, o), V, q)
           for V in domain.boundary}
    b_total = sum(v.value for v in bnd.values())
    rhs = lap.value - b_total
    rhs_levels = np.asarray(lap.levels) - sum(np.asarray(v.levels) for v in bnd.values())
    return IbpResult(
        lhs=lhs.value, rhs=rhs, rel_err=relative_error(lhs.value, rhs),
        lhs_error=lhs.error, rhs_error=lap.error + sum(v.error for v in bnd.values()),
        boundary_terms={k: v.value for k, v in bnd.items()},
        interior_terms={"laplacian_sq": lap.value, "boundary_total": b_total},
        quadrature=_qmeta(q), level_rel_errs=_level_rel_errs(lhs, rhs_levels))


def check_harmonic(domain: BoundedDomain, f: ScalarField, n: int = 128, tol: float = HARMONIC_TOL) -> float:
    pts = domain.sample_interior(n, seed=2)
    lap = np.asarray(jax.jit(jax.vmap(lambda x: laplacian_fn(domain.g.fn, f.fn, x)))(pts))
    worst = float(np.max(np.abs(lap)))
    if worst > tol:
        raise NotHarmonic(f"|Lap f| reaches {worst:.3e} inside {domain.name}")
    return worst


def ibp_check(domain: BoundedDomain, f: ScalarField, q: Quadrature | None = None) -> IbpResult:
    """``2∫|ddbar f|^2`` against ``-∫_∂ L(*(Jdf ^ df)) dA`` for harmonic ``f``."""
    q = Quadrature() if q is None else q
    g, J = domain.g, domain.J
    check_harmonic(domain, f)
    o = complex_orientation(g, J, domain.sample_interior(1)[0])
    for V in domain.boundary:
        frame, wedge_route = boundary_density_routes(f, V, g, J, V.sample(8, seed=4))  # NotLevelSet
        if np.any(np.abs(frame - wedge_route) > ROUTE_TOL * np.maximum(1.0, np.abs(frame))):
            raise ArithmeticError(f"boundary density routes disagree on {V.name}")
    ddf = dJd_field(f, J)
    lhs = integrate_domain(g, lambda x: 0.5 * forms.norm_sq(g.fn(x), ddf.form_fn(x)), domain.region, q)
    bnd = {}
    for V in domain.boundary:
        dens = boundary_density_fn(f, V, g, J, o)
        res = integrate_hypersurface(g, lambda x, dens=dens: -dens(x), V, q)
        bnd[V.name] = res
    rhs = sum(v.value for v in bnd.values())
    rhs_levels = sum(np.asarray(v.levels) for v in bnd.values())
    return IbpResult(
        lhs=lhs.value, rhs=rhs, rel_err=relative_error(lhs.value, rhs),
        lhs_error=lhs.error, rhs_error=sum(v.error for v in bnd.values()),
        boundary_terms={k: v.value for k, v in bnd.items()}, quadrature=_qmeta(q),
        level_rel_errs=_level_rel_errs(lhs, rhs_levels))


def capacity(domain: BoundedDomain, f: ScalarField, q: Quadrature | None = None) -> Integral:
    """``∫ |df|^2`` over the domain."""
    q = Quadrature() if q is None else q
    g = domain.g
    df = d(f)
    return integrate_domain(g, lambda x: forms.norm_sq(g.fn(x), df.form_fn(x)), domain.region, q)


@dataclass(frozen=True)
class OracleRow:
    check_id: str
    expected: float
    tolerance: float
    note: str


def read_oracles(path: str | Path | None = None) -> dict[str, OracleRow]:
    """Parse ``check_id expected_value tolerance derivation_note`` rows ('#' comments)."""
    if path is None:
        text = resources.files("kahlerverify").joinpath("data/oracles.txt").read_text()
    else:
        text = Path(path).read_text()
    rows = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(maxsplit=3)
        if len(parts) < 3:
            raise ValueError(f"malformed oracle row: {line!r}")
        cid, val, tol = parts[:3]
        rows[cid] = OracleRow(cid, float(val), float(tol), parts[3] if len(parts) > 3 else "")
    return rows


def write_oracles(rows, path: str | Path) -> None:
    lines = ["# check_id expected_value tolerance derivation_note"]
    for r in rows:
        lines.append(f"{r.check_id} {r.expected!r} {r.tolerance!r} {r.note}")
    Path(path).write_text("\n".join(lines) + "\n")
