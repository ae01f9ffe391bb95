"""Hypersurfaces, unit normals, Levi forms and pseudoconvexity.

The Levi form of ``V = {rho = 0}`` with unit normal ``n = s drho/|drho|`` is
``L = -1/2 dJn`` restricted to ``{n, Jn}^perp``.  Evaluated on 1-forms it is
``L(eta, gamma) = -1/2 *(eta ^ gamma ^ *dJn)``.  On the rank-2 distribution
it is fixed by the single number ``L(J eta, eta)`` for a unit ``eta``, which
is what :func:`levi_form` reports and :func:`classify` uses.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np
from scipy.stats import qmc

from . import forms
from .complexstruct import AlmostComplexStructure, complex_orientation
from .errors import DegenerateDefiningFunction, NotLevelSet
from .fields import Chart, MetricField, OneFormField, ScalarField, d
from .forms import Form
from .quadrature import Box

EPS_DEF = 1e-6
EPS_LEVEL = 1e-8
TOL_FLOOR = 1e-12
TOL_LEVEL_SET = 1e-6


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """Level set ``{rho = 0}`` with a chosen normal and a 3-parameter patch."""

    chart: Chart
    rho: ScalarField
    normal_sign: int = 1
    patch: Callable | None = None
    box: Box | None = None
    name: str = ""

    def flipped(self) -> "Hypersurface":
        return replace(self, normal_sign=-self.normal_sign)

    def with_rho(self, rho: ScalarField) -> "Hypersurface":
        return replace(self, rho=rho)

    def sample(self, n: int, seed: int = 0) -> np.ndarray:
        """``n`` deterministic quasi-random points of ``V`` from the patch."""
        box = np.asarray(self.box.ranges, dtype=float)
        u = qmc.Halton(d=3, scramble=True, seed=seed).random(n)
        u = box[:, 0] + u * (box[:, 1] - box[:, 0])
        pts = np.asarray(jax.vmap(self.patch)(u))
        self.chart.check(pts)
        return pts


def normal_fn(V: Hypersurface, g: MetricField, rho_fn=None):
    rho_fn = V.rho.fn if rho_fn is None else rho_fn

    def fn(x):
        drho = jax.grad(rho_fn)(x)
        size = jnp.sqrt(drho @ jnp.linalg.inv(g.fn(x)) @ drho)
        return V.normal_sign * drho / size

    return fn


def normal_field(V: Hypersurface, g: MetricField) -> OneFormField:
    return OneFormField(V.chart, normal_fn(V, g))


def _check_on_surface(V: Hypersurface, g: MetricField, pts: np.ndarray) -> None:
    V.chart.check(pts)
    scale = V.chart.scale
    rho = np.atleast_1d(V.rho(pts))
    if np.any(np.abs(rho) > EPS_LEVEL * max(1.0, scale)):
        raise NotLevelSet(f"point is off the hypersurface (|rho| = {np.abs(rho).max():.2e})")
    drho = np.atleast_2d(d(V.rho)(pts))
    gi = np.linalg.inv(np.asarray(g(pts)).reshape(-1, 4, 4))
    size = np.sqrt(np.einsum("ni,nij,nj->n", drho, gi, drho))
    if np.any(size < EPS_DEF * scale):
        raise DegenerateDefiningFunction(f"|d rho| = {size.min():.2e} is too small")


def unit_normal(V: Hypersurface, g: MetricField, p) -> Form:
    p = np.asarray(p, dtype=float)
    _check_on_surface(V, g, p)
    return Form(1, np.asarray(normal_field(V, g)(p)))


def levi_twoform_fn(V: Hypersurface, g: MetricField, J: AlmostComplexStructure, rho_fn=None):
    """``x -> dJn`` components, with ``n`` extended off ``V`` as ``s drho/|drho|``."""
    nfn = normal_fn(V, g, rho_fn)

    def jn(x):
        return jnp.einsum("ki,k->i", J.fn(x), nfn(x))

    def fn(x):
        return forms.d_from_jacobian(jax.jacfwd(jn)(x), 1)

    return fn


def adapted_coframe(n: np.ndarray, Jm: np.ndarray, gi: np.ndarray) -> np.ndarray:
    """Rows ``n, Jn, eta, J eta`` with ``eta`` from Gram-Schmidt on the first usable ``dx^k``."""
    def ip(a, b):
        return a @ gi @ b

    Jn = Jm.T @ n
    basis = [n / np.sqrt(ip(n, n))]
    jn = Jn - ip(Jn, basis[0]) * basis[0]
    basis.append(jn / np.sqrt(ip(jn, jn)))
    for k in range(4):
        e = np.eye(4)[k]
        r = e - sum(ip(e, b) * b for b in basis)
        if np.sqrt(ip(r, r)) > 1e-3 * np.sqrt(ip(e, e)):
            eta = r / np.sqrt(ip(r, r))
            break
    else:  # pragma: no cover - four coordinate covectors always span
        raise DegenerateDefiningFunction("no coordinate covector transverse to {n, Jn}")
    return np.array([basis[0], basis[1], eta, Jm.T @ eta])


def _L_pair(G, F: Form, a, b, orientation: int) -> float:
    """``-1/2 *(a ^ b ^ *F)``."""
    star_F = forms.hodge_star(G, F, orientation)
    top = forms.wedge(forms.wedge(Form(1, a), Form(1, b)), star_F)
    return float(-0.5 * forms.hodge_star(G, top, orientation).comps[0])


@dataclass(frozen=True)
class LeviValue:
    value: float
    restricted: np.ndarray
    coframe: np.ndarray


def _levi_at(G, Jm, n, F, orientation) -> LeviValue:
    gi = np.linalg.inv(G)
    frame = adapted_coframe(n, Jm, gi)
    eta, jeta = frame[2], frame[3]
    F = Form(2, F)
    pair = [eta, jeta]
    restricted = np.array([[_L_pair(G, F, a, b, orientation) for b in pair] for a in pair])
    return LeviValue(restricted[1, 0], restricted, frame)


def levi_form(V: Hypersurface, g: MetricField, J: AlmostComplexStructure, p,
              rho_fn=None) -> LeviValue:
    """``L(J eta, eta)`` at ``p`` plus the Levi 2-form restricted to ``span{eta, J eta}``."""
    p = np.asarray(p, dtype=float)
    _check_on_surface(V, g, p)
    F = np.asarray(jax.jit(levi_twoform_fn(V, g, J, rho_fn))(p))
    n = np.asarray(normal_fn(V, g, rho_fn)(p))
    o = complex_orientation(g, J, p)
    return _levi_at(np.asarray(g(p)), np.asarray(J(p)), n, F, o)


def levi_values(V: Hypersurface, g: MetricField, J: AlmostComplexStructure, points,
                rho_fn=None) -> tuple[np.ndarray, np.ndarray]:
    """Levi values at a batch of points of ``V`` and ``|dJn|_g`` there."""
    pts = np.atleast_2d(points)
    _check_on_surface(V, g, pts)
    Ffn = levi_twoform_fn(V, g, J, rho_fn)
    nfn = normal_fn(V, g, rho_fn)
    F = np.asarray(jax.jit(jax.vmap(Ffn))(pts))
    N = np.asarray(jax.jit(jax.vmap(nfn))(pts))
    G = np.asarray(g(pts))
    Jm = np.asarray(J(pts))
    o = complex_orientation(g, J, pts[0])
    vals = np.array([_levi_at(G[k], Jm[k], N[k], F[k], o).value for k in range(len(pts))])
    sizes = np.sqrt(np.asarray(forms.norm_sq(G, Form(2, F))))
    return vals, sizes


class Classification(str, enum.Enum):
    STRICTLY_PSEUDOCONVEX = "StrictlyPseudoconvex"
    PSEUDOCONVEX = "Pseudoconvex"
    LEVI_FLAT = "LeviFlat"
    PSEUDOCONCAVE = "Pseudoconcave"
    STRICTLY_PSEUDOCONCAVE = "StrictlyPseudoconcave"
    INDEFINITE = "Indefinite"

    def mirrored(self) -> "Classification":
        return _MIRROR[self]


_MIRROR = {
    Classification.STRICTLY_PSEUDOCONVEX: Classification.STRICTLY_PSEUDOCONCAVE,
    Classification.PSEUDOCONVEX: Classification.PSEUDOCONCAVE,
    Classification.LEVI_FLAT: Classification.LEVI_FLAT,
    Classification.PSEUDOCONCAVE: Classification.PSEUDOCONVEX,
    Classification.STRICTLY_PSEUDOCONCAVE: Classification.STRICTLY_PSEUDOCONVEX,
    Classification.INDEFINITE: Classification.INDEFINITE,
}


def classify_values(values, tol: float) -> Classification:
    v = np.asarray(values)
    if np.all(np.abs(v) < tol):
        return Classification.LEVI_FLAT
    if np.all(v > tol):
        return Classification.STRICTLY_PSEUDOCONVEX
    if np.all(v > -tol):
        return Classification.PSEUDOCONVEX
    if np.all(v < -tol):
        return Classification.STRICTLY_PSEUDOCONCAVE
    if np.all(v < tol):
        return Classification.PSEUDOCONCAVE
    return Classification.INDEFINITE


@dataclass(frozen=True)
class LeviReport:
    samples: np.ndarray
    values: np.ndarray
    classification: Classification
    tolerance: float


def classify(V: Hypersurface, g: MetricField, J: AlmostComplexStructure,
             sample_count: int = 64, tol: float | None = None, seed: int = 0) -> LeviReport:
    if sample_count < 32:
        raise ValueError("classification needs at least 32 samples")
    pts = V.sample(sample_count, seed)
    vals, sizes = levi_values(V, g, J, pts)
    if tol is None:
        tol = max(1e-6 * float(np.max(sizes)), TOL_FLOOR)
    return LeviReport(pts, vals, classify_values(vals, tol), tol)


def boundary_density_fn(f: ScalarField, V: Hypersurface, g: MetricField,
                        J: AlmostComplexStructure, orientation: int):
    """Traceable ``x -> L(*(Jdf ^ df))`` by the direct wedge formula."""
    Ffn = levi_twoform_fn(V, g, J)

    def fn(x):
        G = g.fn(x)
        df = Form(1, jax.grad(f.fn)(x))
        jdf = forms.apply_endomorphism(J.fn(x), df)
        arg = forms.hodge_star(G, forms.wedge(jdf, df), orientation)
        star_F = forms.hodge_star(G, Form(2, Ffn(x)), orientation)
        top = forms.wedge(arg, star_F)
        return -0.5 * forms.hodge_star(G, top, orientation).comps[0]

    return fn


def boundary_density_routes(f: ScalarField, V: Hypersurface, g: MetricField,
                            J: AlmostComplexStructure, p):
    """``(adapted-frame value, direct wedge value)`` of ``L(*(Jdf ^ df))``.

    ``p`` is one point of ``V`` (floats returned) or a batch (arrays returned).
    The frame route is ``|df|^2 L(J eta, eta)``, valid because ``df`` is
    normal to ``V``; this is checked and :class:`NotLevelSet` raised otherwise.
    """
    p = np.asarray(p, dtype=float)
    pts = np.atleast_2d(p)
    _check_on_surface(V, g, pts)
    G = np.asarray(g(pts)).reshape(-1, 4, 4)
    gi = np.linalg.inv(G)
    df = np.atleast_2d(np.asarray(d(f)(pts)))
    size_sq = np.einsum("ni,nij,nj->n", df, gi, df)
    N = np.asarray(jax.jit(jax.vmap(normal_fn(V, g)))(pts))
    tangential = df - np.einsum("ni,nij,nj->n", df, gi, N)[:, None] * N
    tan_size = np.sqrt(np.einsum("ni,nij,nj->n", tangential, gi, tangential))
    if np.any(tan_size > TOL_LEVEL_SET * np.sqrt(size_sq)):
        raise NotLevelSet("df is not normal to the hypersurface")
    o = complex_orientation(g, J, pts[0])
    F = np.asarray(jax.jit(jax.vmap(levi_twoform_fn(V, g, J)))(pts))
    Jm = np.asarray(J(pts)).reshape(-1, 4, 4)
    frame_route = np.array([0.0 if size_sq[k] == 0.0 else size_sq[k] * _levi_at(G[k], Jm[k], N[k], F[k], o).value
                            for k in range(len(pts))])
    wedge_route = np.asarray(jax.jit(jax.vmap(boundary_density_fn(f, V, g, J, o)))(pts))
    if p.ndim == 1:
        return float(frame_route[0]), float(wedge_route[0])
    return frame_route, wedge_route


def boundary_density(f: ScalarField, V: Hypersurface, g: MetricField,
                     J: AlmostComplexStructure, p, agree_tol: float = 1e-8) -> float:
    """``L(*(Jdf ^ df))`` at a point of ``V`` where ``f`` is locally constant on ``V``."""
    frame_route, wedge_route = boundary_density_routes(f, V, g, J, p)
    if np.any(np.abs(frame_route - wedge_route) > agree_tol * np.maximum(1.0, np.abs(frame_route))):
        raise ArithmeticError(
            f"boundary density routes disagree: {frame_route!r} vs {wedge_route!r}")
    return frame_route
