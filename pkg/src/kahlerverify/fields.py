"""Coordinate charts and differential calculus for fields on them.

Fields are thin wrappers around JAX-traceable functions of a length-4
coordinate array.  Derivatives are taken by forward-mode automatic
differentiation (``jax.jacfwd``), so differentiating a derived field such as
``d(J(d(f)))`` propagates exact first and second derivatives through the
whole expression.  Central finite differences are available only as an
independent cross-check (``mode="fd"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Callable, Sequence

import jax
import jax.numpy as jnp
import numpy as np
from scipy.stats import qmc

from . import forms
from .errors import DegreeError, MetricDegenerate, SingularPoint
from .forms import Form

FD_STEP = 1e-5
EPS_PD = 1e-12


@dataclass(frozen=True)
class Chart:
    """A coordinate box in four real variables.

    ``singular_loci`` is a tuple of ``(axis, value)`` pairs, where ``axis``
    may also be a tuple of axes with a matching tuple of values (a locus of
    higher codimension); points closer than ``margin`` to any of them are
    rejected with :class:`SingularPoint`.
    ``orientation`` is the sign of the positive 4-form relative to
    ``dx^0 ^ dx^1 ^ dx^2 ^ dx^3``.
    """

    name: str
    ranges: tuple = ((-1.0, 1.0),) * 4
    periodic: tuple = (False,) * 4
    singular_loci: tuple = ()
    orientation: int = 1
    scale: float = 1.0
    sing_margin: float | None = None

    def __post_init__(self):
        if len(self.ranges) != 4 or len(self.periodic) != 4:
            raise ValueError("a chart has exactly four coordinate axes")
        for lo, hi in self.ranges:
            if not lo < hi:
                raise ValueError(f"degenerate coordinate range [{lo}, {hi}]")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def margin(self) -> float:
        return 1e-3 * self.scale if self.sing_margin is None else self.sing_margin

    def check(self, points) -> None:
        pts = np.atleast_2d(points)
        if not np.all(np.isfinite(pts)):
            raise SingularPoint(f"non-finite coordinates on chart {self.name!r}")
        for axis, value in self.singular_loci:
            if isinstance(axis, tuple):
                dist = np.linalg.norm(pts[:, list(axis)] - np.asarray(value), axis=1)
            else:
                dist = np.abs(pts[:, axis] - value)
            if np.any(dist < self.margin):
                raise SingularPoint(
                    f"point within {self.margin:g} of singular locus x{axis} = {value} "
                    f"on chart {self.name!r}")

    def contains(self, points, tol: float = 1e-12) -> bool:
        pts = np.atleast_2d(points)
        for axis, (lo, hi) in enumerate(self.ranges):
            if self.periodic[axis]:
                continue
            if np.any(pts[:, axis] < lo - tol) or np.any(pts[:, axis] > hi + tol):
                return False
        return True

    def sample(self, n: int, seed: int = 0, ranges: Sequence | None = None) -> np.ndarray:
        """Deterministic scrambled-Halton points inside ``ranges`` (default: the chart box)."""
        box = np.asarray(self.ranges if ranges is None else ranges, dtype=float)
        u = qmc.Halton(d=4, scramble=True, seed=seed).random(n)
        pts = box[:, 0] + u * (box[:, 1] - box[:, 0])
        self.check(pts)
        return pts


def euclidean_chart(name: str = "R4", half_width: float = 10.0, **kw) -> Chart:
    return Chart(name, ((-half_width, half_width),) * 4, **kw)


@dataclass(frozen=True, eq=False)
class Field:
    """A function of chart coordinates, evaluable at one point or a batch."""

    chart: Chart
    fn: Callable
    name: str = dc_field(default="")

    @cached_property
    def _batched(self):
        return jax.jit(jax.vmap(self.fn))

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        pts = np.atleast_2d(p)
        self.chart.check(pts)
        out = np.asarray(self._batched(pts))
        return out[0] if p.ndim == 1 else out


class FormField(Field):
    degree: int = -1

    def form_fn(self, x) -> Form:
        comps = self.fn(x)
        if self.degree == 0:
            comps = comps[..., None]
        return Form(self.degree, comps)

    def value(self, p) -> Form:
        comps = self(p)
        if self.degree == 0:
            comps = np.asarray(comps)[..., None]
        return Form(self.degree, comps)

    def _combine(self, other, op):
        if isinstance(other, FormField):
            if other.degree != self.degree:
                raise DegreeError("cannot add fields of different degree")
            return form_field(self.chart, lambda x: op(self.fn(x), other.fn(x)), self.degree)
        return NotImplemented

    def __add__(self, other):
        return self._combine(other, jnp.add)

    def __sub__(self, other):
        return self._combine(other, jnp.subtract)

    def __neg__(self):
        return form_field(self.chart, lambda x: -self.fn(x), self.degree)

    def __mul__(self, other):
        """Multiply by a constant or by a scalar field."""
        if isinstance(other, FormField):
            if other.degree != 0:
                return NotImplemented
            return form_field(self.chart, lambda x: other.fn(x) * self.fn(x), self.degree)
        return form_field(self.chart, lambda x: other * self.fn(x), self.degree)

    __rmul__ = __mul__

    def __xor__(self, other: "FormField") -> "FormField":
        if self.degree + other.degree > 4:
            raise DegreeError(f"wedge of degrees {self.degree}+{other.degree} exceeds 4")
        deg = self.degree + other.degree

        def fn(x):
            comps = forms.wedge(self.form_fn(x), other.form_fn(x)).comps
            return comps[0] if deg == 0 else comps

        return form_field(self.chart, fn, deg)


class ScalarField(FormField):
    degree = 0


class OneFormField(FormField):
    degree = 1


class TwoFormField(FormField):
    degree = 2


class ThreeFormField(FormField):
    degree = 3


class VolumeFormField(FormField):
    degree = 4


_FORM_CLASSES = {0: ScalarField, 1: OneFormField, 2: TwoFormField,
                 3: ThreeFormField, 4: VolumeFormField}


def form_field(chart: Chart, fn: Callable, degree: int, name: str = "") -> FormField:
    if degree not in _FORM_CLASSES:
        raise DegreeError(f"no {degree}-forms in dimension 4")
    return _FORM_CLASSES[degree](chart, fn, name)


def constant_form(chart: Chart, form: Form) -> FormField:
    comps = jnp.asarray(form.comps)
    if form.degree == 0:
        return ScalarField(chart, lambda x: comps[0] + 0.0 * x[0])
    return form_field(chart, lambda x: comps + 0.0 * x[0], form.degree)


def coordinate_function(chart: Chart, axis: int) -> ScalarField:
    return ScalarField(chart, lambda x: x[axis], name=f"x{axis}")


class MetricField(Field):
    """Symmetric positive-definite 4x4 coefficient field ``g_ij``."""

    def __init__(self, chart: Chart, fn: Callable, name: str = "", orientation: int | None = None):
        super().__init__(chart, fn, name)
        object.__setattr__(self, "orientation",
                           chart.orientation if orientation is None else orientation)

    def matrix(self, p, check: bool = True) -> np.ndarray:
        G = self(p)
        if check:
            check_positive(G)
        return G

    def inverse_fn(self, x):
        return jnp.linalg.inv(self.fn(x))

    def christoffel_fn(self, x):
        return christoffel(self.fn, x)

    def volume_density_fn(self, x):
        return jnp.sqrt(jnp.linalg.det(self.fn(x)))


def check_positive(G, eps: float = EPS_PD) -> None:
    G = np.asarray(G)
    if not np.allclose(G, np.swapaxes(G, -1, -2), rtol=0, atol=1e-12 * max(1.0, np.abs(G).max())):
        raise MetricDegenerate("metric coefficients are not symmetric")
    if np.any(np.linalg.eigvalsh(G) <= eps):
        raise MetricDegenerate("metric is not positive definite")


def flat_metric(chart: Chart) -> MetricField:
    eye = jnp.eye(4)
    return MetricField(chart, lambda x: eye + 0.0 * x[0], name="flat")


def christoffel(gfn: Callable, x):
    """``Gamma[k, i, j]`` of the Levi-Civita connection of ``gfn`` at ``x``."""
    gi = jnp.linalg.inv(gfn(x))
    dg = jax.jacfwd(gfn)(x)  # dg[i, j, l] = d_l g_ij
    # lowered[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    lowered = dg.transpose(2, 0, 1) + dg.transpose(0, 2, 1) - dg
    return 0.5 * jnp.einsum("kl,ijl->kij", gi, lowered)


def d(field: FormField) -> FormField:
    """Exterior derivative as a new field (exact forward-mode derivatives)."""
    k = field.degree
    if k >= 4:
        raise DegreeError("the exterior derivative of a 4-form vanishes in dimension 4")

    def fn(x):
        jac = jax.jacfwd(field.fn)(x)
        if k == 0:
            jac = jac[None, :]
        return forms.d_from_jacobian(jac, k)

    return form_field(field.chart, fn, k + 1, name=f"d({field.name})" if field.name else "")


def _fd_jacobian(field: Field, p: np.ndarray, h: float) -> np.ndarray:
    steps = h * np.eye(4)
    plus = np.asarray(field(p + steps))
    minus = np.asarray(field(p - steps))
    jac = (plus - minus) / (2 * h)  # jac[i, ...] = d_i
    return np.moveaxis(jac, 0, -1)


def exterior_derivative(field: FormField, p, mode: str = "forward", h: float | None = None) -> Form:
    """Value of ``d(field)`` at ``p``; ``mode="fd"`` uses central differences."""
    p = np.asarray(p, dtype=float)
    field.chart.check(p)
    if field.degree >= 4:
        raise DegreeError("the exterior derivative of a 4-form vanishes in dimension 4")
    if mode == "forward":
        return d(field).value(p)
    if mode != "fd":
        raise ValueError(f"unknown derivative mode {mode!r}")
    h = FD_STEP * field.chart.scale if h is None else h
    jac = _fd_jacobian(field, p, h)
    if field.degree == 0:
        jac = jac[None, :]
    return Form(field.degree + 1, np.asarray(forms.d_from_jacobian(jac, field.degree)))


def wedge(a: Form, b: Form) -> Form:
    return forms.wedge(a, b)


def hodge_star(g: MetricField, phi: Form, p) -> Form:
    G = g.matrix(p)
    return forms.hodge_star(G, phi, g.orientation).numpy()


def hodge_star_field(g: MetricField, phi: FormField, orientation: int | None = None) -> FormField:
    o = g.orientation if orientation is None else orientation

    def fn(x):
        comps = forms.hodge_star(g.fn(x), phi.form_fn(x), o).comps
        return comps[0] if phi.degree == 4 else comps

    return form_field(phi.chart, fn, 4 - phi.degree)


def norm_sq_field(g: MetricField, phi: FormField) -> ScalarField:
    return ScalarField(phi.chart, lambda x: forms.norm_sq(g.fn(x), phi.form_fn(x)))


def laplacian_fn(gfn: Callable, ffn: Callable, x):
    """``+trace_g Hess f`` (positive on convex functions)."""
    gi = jnp.linalg.inv(gfn(x))
    gradf = jax.jacfwd(ffn)
    grad = gradf(x)
    hess = jax.jacfwd(gradf)(x)  # forward-over-forward is cheapest in dimension 4
    gam = christoffel(gfn, x)
    return jnp.einsum("ij,ij->", gi, hess) - jnp.einsum("ij,kij,k->", gi, gam, grad)


def laplacian_field(g: MetricField, f: ScalarField) -> ScalarField:
    return ScalarField(f.chart, lambda x: laplacian_fn(g.fn, f.fn, x))


def laplacian(g: MetricField, f: ScalarField, p) -> float | np.ndarray:
    return laplacian_field(g, f)(p)
