"""Almost-complex structures, integrability tests, Kähler forms and dJd.

Conventions: an endomorphism field is stored as ``Jm`` with
``J d_i = Jm[k, i] d_k``.  On 1-forms ``J eta = eta o J`` so that
``(J eta)_i = eta_k Jm[k, i]``; with the standard structure on C^2
(``J d_0 = d_1``) this gives ``J dx^0 = -dx^1`` and the (1,0)-forms are the
``+i`` eigenforms.  The Kähler form is ``omega(X, Y) = g(JX, Y)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from . import forms
from .errors import EigenbasisError, NotCompatible
from .fields import (Chart, Field, MetricField, OneFormField, ScalarField,
                     TwoFormField, d, laplacian_fn)
from .forms import Form

TOL_STRUCTURE = 1e-10


class AlmostComplexStructure(Field):
    """Endomorphism field ``Jm(x)`` with ``J^2 = -Id``."""

    def square_residual(self, points) -> float:
        Jm = np.atleast_3d(self(points)).reshape(-1, 4, 4)
        return float(np.max(np.abs(Jm @ Jm + np.eye(4))))

    def compatibility_residual(self, g: MetricField, points) -> float:
        Jm = self(points).reshape(-1, 4, 4)
        G = g(points).reshape(-1, 4, 4)
        lhs = np.swapaxes(Jm, -1, -2) @ G @ Jm
        return float(np.max(np.abs(lhs - G) / np.max(np.abs(G), axis=(-1, -2))[:, None, None]))


def standard_structure(chart: Chart) -> AlmostComplexStructure:
    """Constant structure with ``J d_0 = d_1`` and ``J d_2 = d_3`` (``z_k = x_2k + i x_2k+1``)."""
    Jm = jnp.array([[0.0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
    return AlmostComplexStructure(chart, lambda x: Jm + 0.0 * x[0], name="J_std")


def apply_J(J: AlmostComplexStructure, eta: Form, p) -> Form:
    return forms.apply_endomorphism(J(p), eta).numpy()


def J_of(J: AlmostComplexStructure, eta: OneFormField) -> OneFormField:
    return OneFormField(eta.chart, lambda x: jnp.einsum("ki,k->i", J.fn(x), eta.fn(x)))


def nijenhuis_fn(Jfn, x):
    """``N[l, i, j]``: components of N(d_i, d_j) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]."""
    Jm = Jfn(x)
    DJ = jax.jacfwd(Jfn)(x)  # DJ[l, j, k] = d_k Jm[l, j]
    t1 = jnp.einsum("ki,ljk->lij", Jm, DJ)
    t3 = jnp.einsum("lk,kij->lij", Jm, DJ)
    return t1 - jnp.swapaxes(t1, 1, 2) + t3 - jnp.swapaxes(t3, 1, 2)


def nijenhuis(J: AlmostComplexStructure, p) -> tuple[np.ndarray, float]:
    """Nijenhuis tensor at ``p`` and its max-norm over coordinate components."""
    p = np.asarray(p, dtype=float)
    J.chart.check(p)
    N = np.asarray(jax.jit(nijenhuis_fn, static_argnums=0)(J.fn, p))
    return N, float(np.max(np.abs(N)))


def nijenhuis_max(J: AlmostComplexStructure, points) -> np.ndarray:
    """Max-norm of N at each of a batch of points."""
    points = np.atleast_2d(points)
    J.chart.check(points)
    batched = jax.jit(jax.vmap(lambda x: jnp.max(jnp.abs(nijenhuis_fn(J.fn, x)))))
    return np.asarray(batched(points))


def integrability_tolerance(J: AlmostComplexStructure, p) -> float:
    """Scale-aware verdict threshold ``1e-6 (1 + max|dJ|)``."""
    DJ = np.asarray(jax.jacfwd(J.fn)(jnp.asarray(p, dtype=float)))
    return 1e-6 * (1.0 + float(np.max(np.abs(DJ))))


def _eigenbasis(Jm: np.ndarray, tol: float = 1e-8):
    """Unit eigenvectors of ``Jm`` for +i (two of them), deterministically ordered."""
    vals, vecs = np.linalg.eig(Jm)
    if np.max(np.abs(vals ** 2 + 1.0)) > tol:
        raise EigenbasisError(f"eigenvalues {vals} are not +-i")
    plus = [k for k in range(4) if vals[k].imag > 0]
    if len(plus) != 2:
        raise EigenbasisError("the +i eigenspace is not 2-dimensional")
    V = vecs[:, plus]
    # fix the phase: largest component real and positive, then order lexicographically
    for c in range(2):
        k = int(np.argmax(np.abs(V[:, c]) > 1e-12 * np.abs(V[:, c]).max()))
        V[:, c] *= np.conj(V[k, c]) / abs(V[k, c])
        V[:, c] /= np.linalg.norm(V[:, c])
    order = sorted(range(2), key=lambda c: tuple(np.round(np.abs(V[:, c]), 12)), reverse=True)
    V = V[:, order]
    if np.linalg.svd(V, compute_uv=False)[-1] < tol:
        raise EigenbasisError("defective +i eigenbasis")
    return V


def ideal_closure_check(J: AlmostComplexStructure, p) -> float:
    """Size of the (2,0)-part of d(Lambda^{0,1}) at ``p``.

    The (0,1)-forms are extended off ``p`` by the smooth projector
    ``(Id + i J^T)/2`` applied to two coordinate covectors, and ``d`` of
    each is evaluated on a unit basis of ``T^{1,0}``.  Zero iff
    ``d(Lambda^{0,1})`` lies in ``Lambda^1 ^ Lambda^{0,1}``.
    """
    p = np.asarray(p, dtype=float)
    J.chart.check(p)
    Jm = np.asarray(J(p))
    V = _eigenbasis(Jm)
    proj = 0.5 * (np.eye(4) + 1j * Jm.T)
    best = max(itertools.combinations(range(4), 2),
               key=lambda ks: np.linalg.svd(proj[:, ks], compute_uv=False)[-1])

    def theta(x, k, part):
        P = 0.5 * (jnp.eye(4) + 1j * J.fn(x).T)
        col = P[:, k]
        return jnp.real(col) if part == 0 else jnp.imag(col)

    residual = 0.0
    for k in best:
        size = np.linalg.norm(proj[:, k])
        F = np.zeros((4, 4), dtype=complex)
        for part, unit in ((0, 1.0), (1, 1j)):
            jac = np.asarray(jax.jacfwd(lambda x: theta(x, k, part))(jnp.asarray(p)))
            F += unit * (jac.T - jac)  # F[i, j] = d_i th_j - d_j th_i
        val = abs(V[:, 0] @ F @ V[:, 1]) / size
        residual = max(residual, val)
    return float(residual)


def kahler_form_fn(gfn, Jfn, x):
    return forms.two_form_comps(Jfn(x).T @ gfn(x))


def kahler_form(g: MetricField, J: AlmostComplexStructure, samples=None,
                tol: float = TOL_STRUCTURE) -> tuple[TwoFormField, float]:
    """``omega = g(J., .)`` and ``sup |d omega|_g`` over ``samples``."""
    omega = TwoFormField(g.chart, lambda x: kahler_form_fn(g.fn, J.fn, x), name="omega")
    if samples is None:
        return omega, float("nan")
    samples = np.atleast_2d(samples)
    bad = J.compatibility_residual(g, samples)
    if bad > tol:
        raise NotCompatible(f"g(JX, JY) != g(X, Y): relative residual {bad:.2e}")
    return omega, closedness_residual(g, omega, samples)


def closedness_residual(g: MetricField, omega: TwoFormField, samples) -> float:
    domega = d(omega)
    norms = jax.jit(jax.vmap(lambda x: forms.norm_sq(g.fn(x), domega.form_fn(x))))
    return float(np.sqrt(np.max(np.asarray(norms(np.atleast_2d(samples))))))


def complex_orientation(g: MetricField, J: AlmostComplexStructure, p) -> int:
    """Sign of ``omega ^ omega`` relative to the chart's coordinate 4-form."""
    om = Form(2, np.asarray(kahler_form_fn(g.fn, J.fn, jnp.asarray(p, dtype=float))))
    return 1 if float(forms.wedge(om, om).comps[0]) > 0 else -1


@dataclass(frozen=True)
class KahlerTriple:
    g: MetricField
    J: AlmostComplexStructure
    omega: TwoFormField
    kahler: bool = True

    @classmethod
    def from_metric(cls, g: MetricField, J: AlmostComplexStructure, kahler: bool = True):
        omega, _ = kahler_form(g, J)
        return cls(g, J, omega, kahler)

    def validate(self, points, tol: float = TOL_STRUCTURE, closed_tol: float = 1e-9) -> dict:
        points = np.atleast_2d(points)
        out = {
            "square": self.J.square_residual(points),
            "compatible": self.J.compatibility_residual(self.g, points),
        }
        om_expected = np.asarray(jax.vmap(lambda x: kahler_form_fn(self.g.fn, self.J.fn, x))(points))
        out["omega"] = float(np.max(np.abs(self.omega(points) - om_expected)))
        out["closed"] = closedness_residual(self.g, self.omega, points)
        failures = [k for k in ("square", "compatible", "omega") if out[k] > tol]
        if self.kahler and out["closed"] > closed_tol:
            failures.append("closed")
        if failures:
            raise NotCompatible(f"Kähler triple fails {failures}: {out}")
        return out


def dJd_field(f: ScalarField, J: AlmostComplexStructure) -> TwoFormField:
    """``d(J df)``; equals ``-2 sqrt(-1) ddbar f``."""
    return d(J_of(J, d(f)))


def dJd(f: ScalarField, J: AlmostComplexStructure, p) -> Form:
    p = np.asarray(p, dtype=float)
    J.chart.check(p)
    return dJd_field(f, J).value(p)


def ddbar_norm_sq_field(f: ScalarField, g: MetricField, J: AlmostComplexStructure) -> ScalarField:
    """``|ddbar f|^2 := |dJdf|_g^2 / 4``."""
    ddf = dJd_field(f, J)
    return ScalarField(f.chart, lambda x: 0.25 * forms.norm_sq(g.fn(x), ddf.form_fn(x)))


def star_identity_residual_fn(g: MetricField, J: AlmostComplexStructure, f: ScalarField,
                              orientation: int):
    ddf = dJd_field(f, J)

    def fn(x):
        G = g.fn(x)
        phi = ddf.form_fn(x)
        om = Form(2, kahler_form_fn(g.fn, J.fn, x))
        lap = laplacian_fn(g.fn, f.fn, x)
        res = forms.hodge_star(G, phi, orientation) + om * lap + phi
        return jnp.sqrt(forms.norm_sq(G, res))

    return fn


def verify_star_identity(g: MetricField, J: AlmostComplexStructure, f: ScalarField, p) -> float:
    """``|*dJdf + (Lap f) omega + dJdf|_g`` at ``p``.

    The Hodge star uses the complex orientation of ``J`` (the one in which
    ``omega`` is self-dual), which is where the identity holds.
    """
    p = np.atleast_2d(np.asarray(p, dtype=float))
    f.chart.check(p)
    o = complex_orientation(g, J, p[0])
    fn = star_identity_residual_fn(g, J, f, o)
    out = np.asarray(jax.jit(jax.vmap(fn))(p))
    return float(out[0]) if out.shape[0] == 1 else out


def verify_star_identity_family(g: MetricField, J: AlmostComplexStructure, make_field: Callable,
                                params, p) -> np.ndarray:
    """Star-identity residuals for ``make_field(c)`` over ``c in params``.

    The family is traced once with ``c`` as an argument; returns an array of
    shape ``(len(params), len(p))``.
    """
    p = np.atleast_2d(np.asarray(p, dtype=float))
    g.chart.check(p)
    o = complex_orientation(g, J, p[0])

    def one(c, x):
        return star_identity_residual_fn(g, J, make_field(c), o)(x)

    batched = jax.jit(jax.vmap(jax.vmap(one, (None, 0)), (0, None)))
    return np.asarray(batched(jnp.asarray(np.asarray(params, dtype=float)), p))


def lambda_plus_projection(g: MetricField, phi: Form, p, orientation: int) -> Form:
    G = np.asarray(g(p))
    return 0.5 * (phi + forms.hodge_star(G, phi, orientation).numpy())
