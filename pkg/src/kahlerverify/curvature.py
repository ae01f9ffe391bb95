"""Riemann, Ricci, scalar and Weyl curvature with the self-dual split.

Sign conventions: ``R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``
and ``R_abcd = g(d_a, R(d_c, d_d) d_b)``, so ``R_abab`` is the sectional
curvature (positive on round spheres).  The curvature operator on
``Lambda^2`` has matrix ``<R(e_i ^ e_j), e_k ^ e_l> = R_ijkl`` in an oriented
orthonormal coframe; its Weyl part splits into 3x3 blocks ``W+`` and ``W-``
on the bases ``(e01 ± e23, e02 ± e31, e03 ± e12)/sqrt 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from . import forms
from .errors import InvalidConformalFactor
from .fields import MetricField, ScalarField, check_positive, christoffel

_S = 1 / np.sqrt(2)
LAMBDA_PLUS = np.array([[_S, 0, 0], [0, _S, 0], [0, 0, _S],
                        [0, 0, _S], [0, -_S, 0], [_S, 0, 0]])
LAMBDA_MINUS = np.array([[_S, 0, 0], [0, _S, 0], [0, 0, _S],
                         [0, 0, -_S], [0, _S, 0], [-_S, 0, 0]])
_PAIRS = np.array(forms.BASIS[2])


def riemann_fn(gfn: Callable, x):
    """``(R_abcd, Ric_ab, s)`` in coordinates at ``x``."""
    G = gfn(x)
    gi = jnp.linalg.inv(G)
    gam = christoffel(gfn, x)
    dgam = jax.jacfwd(lambda y: christoffel(gfn, y))(x)  # dgam[a, b, c, d] = d_d Gamma^a_bc
    up = (jnp.einsum("adbc->abcd", dgam) - jnp.einsum("acbd->abcd", dgam)
          + jnp.einsum("ace,edb->abcd", gam, gam) - jnp.einsum("ade,ecb->abcd", gam, gam))
    R = jnp.einsum("ae,ebcd->abcd", G, up)
    ric = jnp.einsum("ac,abcd->bd", gi, R)
    s = jnp.einsum("bd,bd->", gi, ric)
    return R, ric, s


def weyl_from(R, ric, s, G):
    kulk = (jnp.einsum("ac,bd->abcd", G, ric) - jnp.einsum("ad,bc->abcd", G, ric)
            - jnp.einsum("bc,ad->abcd", G, ric) + jnp.einsum("bd,ac->abcd", G, ric))
    gg = jnp.einsum("ac,bd->abcd", G, G) - jnp.einsum("ad,bc->abcd", G, G)
    return R - 0.5 * kulk + (s / 6.0) * gg


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    return (np.einsum("ac,bd->abcd", h, k) + np.einsum("bd,ac->abcd", h, k)
            - np.einsum("ad,bc->abcd", h, k) - np.einsum("bc,ad->abcd", h, k))


def orthonormal_coframe(G: np.ndarray, orientation: int = 1) -> np.ndarray:
    """Rows ``e^a`` with ``g = sum_a e^a ⊗ e^a``, positively oriented."""
    E = np.linalg.cholesky(G).T
    if orientation < 0:
        E = E.copy()
        E[3] = -E[3]
    return E


def orient_coframe(E: np.ndarray, orientation: int) -> np.ndarray:
    """Flip the last row of ``E`` if its orientation disagrees with ``orientation``."""
    E = np.array(E, dtype=float)
    if np.linalg.det(E) * orientation < 0:
        E[3] = -E[3]
    return E


def operator_matrix(T_frame: np.ndarray) -> np.ndarray:
    """6x6 matrix of a (0,4) curvature-type tensor on the orthonormal Lambda^2 basis."""
    i, j = _PAIRS[:, 0], _PAIRS[:, 1]
    return T_frame[i[:, None], j[:, None], i[None, :], j[None, :]]


def form_to_frame(comps: np.ndarray, E: np.ndarray) -> np.ndarray:
    """2-form components (coordinate basis) -> components on ``e^a ^ e^b``."""
    Fr = np.linalg.inv(E)
    M = Fr.T @ np.asarray(forms.two_form_matrix(comps)) @ Fr
    return M[_PAIRS[:, 0], _PAIRS[:, 1]]


@dataclass(frozen=True)
class CurvaturePack:
    point: np.ndarray
    metric: np.ndarray
    coframe: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    weyl: np.ndarray
    w_plus: np.ndarray
    w_minus: np.ndarray

    def to_frame(self, T: np.ndarray) -> np.ndarray:
        Fr = np.linalg.inv(self.coframe)
        return np.einsum("ia,jb,kc,ld,ijkl->abcd", Fr, Fr, Fr, Fr, T)

    @property
    def ricci_frame(self) -> np.ndarray:
        Fr = np.linalg.inv(self.coframe)
        return Fr.T @ self.ricci @ Fr

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.to_frame(self.riemann)))))

    def bianchi_residual(self) -> float:
        R = self.riemann
        cyc = R + np.einsum("abcd->acdb", R) + np.einsum("abcd->adbc", R)
        return float(np.max(np.abs(cyc)))

    def symmetry_residual(self) -> float:
        R = self.riemann
        return float(max(np.max(np.abs(R + np.einsum("abcd->bacd", R))),
                         np.max(np.abs(R + np.einsum("abcd->abdc", R))),
                         np.max(np.abs(R - np.einsum("abcd->cdab", R)))))

    def reassembly_residual(self) -> float:
        """``R - (W + 1/2 E ⊙ g + s/24 g ⊙ g)`` with ``E`` the traceless Ricci tensor."""
        G = self.metric
        E = self.ricci - 0.25 * self.scalar * G
        rebuilt = self.weyl + 0.5 * kulkarni_nomizu(E, G) + self.scalar / 24 * kulkarni_nomizu(G, G)
        return float(np.max(np.abs(rebuilt - self.riemann)))

    def weyl_trace_residual(self) -> float:
        gi = np.linalg.inv(self.metric)
        return float(np.max(np.abs(np.einsum("ac,abcd->bd", gi, self.weyl))))


def _pack(p, G, R, ric, s, E) -> CurvaturePack:
    W = np.asarray(weyl_from(R, ric, s, G))
    Fr = np.linalg.inv(E)
    W_frame = np.einsum("ia,jb,kc,ld,ijkl->abcd", Fr, Fr, Fr, Fr, W)
    M = operator_matrix(W_frame)
    return CurvaturePack(
        point=np.asarray(p), metric=G, coframe=E, riemann=np.asarray(R),
        ricci=np.asarray(ric), scalar=float(s), weyl=W,
        w_plus=LAMBDA_PLUS.T @ M @ LAMBDA_PLUS,
        w_minus=LAMBDA_MINUS.T @ M @ LAMBDA_MINUS,
    )


_riemann_jit = jax.jit(riemann_fn, static_argnums=0)


def curvature_pack(g: MetricField, p, coframe: Callable | np.ndarray | None = None) -> CurvaturePack:
    """Curvature at ``p``; ``coframe`` (rows, or a function of ``x`` giving rows)
    must be g-orthonormal.  Its last row is negated if needed so that the
    coframe is oriented by ``g.orientation``.  Default: Cholesky coframe."""
    p = np.asarray(p, dtype=float)
    g.chart.check(p)
    G = np.asarray(g(p))
    check_positive(G)
    R, ric, s = (np.asarray(a) for a in _riemann_jit(g.fn, jnp.asarray(p)))
    if coframe is None:
        E = orthonormal_coframe(G, g.orientation)
    else:
        E = orient_coframe(coframe(p) if callable(coframe) else coframe, g.orientation)
    return _pack(p, G, R, ric, s, E)


def curvature_packs(g: MetricField, points, coframe: Callable | None = None) -> list[CurvaturePack]:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    g.chart.check(points)
    R, ric, s = (np.asarray(a) for a in jax.jit(jax.vmap(lambda x: riemann_fn(g.fn, x)))(points))
    G = np.asarray(g(points))
    out = []
    for k, p in enumerate(points):
        check_positive(G[k])
        E = (orthonormal_coframe(G[k], g.orientation) if coframe is None
             else orient_coframe(coframe(p), g.orientation))
        out.append(_pack(p, G[k], R[k], ric[k], s[k], E))
    return out


@dataclass(frozen=True)
class ConformalFactor:
    """Multiplies the metric by ``phi**2``."""

    phi: ScalarField | float


def conformal_change(g: MetricField, phi: ConformalFactor | ScalarField | float,
                     samples: np.ndarray | None = None) -> MetricField:
    if isinstance(phi, ConformalFactor):
        phi = phi.phi
    if isinstance(phi, ScalarField):
        pts = g.chart.sample(256, seed=7) if samples is None else np.atleast_2d(samples)
        vals = np.asarray(phi(pts))
        if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
            raise InvalidConformalFactor("conformal factor is not positive at every sample")
        fn = phi.fn
        return MetricField(g.chart, lambda x: fn(x) ** 2 * g.fn(x), orientation=g.orientation)
    c = float(phi)
    if not c > 0:
        raise InvalidConformalFactor(f"constant conformal factor {c} is not positive")
    return MetricField(g.chart, lambda x: c ** 2 * g.fn(x), orientation=g.orientation)


@dataclass(frozen=True)
class RicciEigenpair:
    value: float
    vector: np.ndarray  # components on the supplied coframe
    axis: int           # coframe element the eigenvector is aligned with


def ricci_eigenstructure(g: MetricField, p, coframe) -> list[RicciEigenpair]:
    """Ricci eigenpairs relative to a unit coframe, listed in coframe order."""
    pack = curvature_pack(g, p, coframe)
    vals, vecs = np.linalg.eigh(pack.ricci_frame)
    weight = vecs ** 2  # weight[axis, k]
    pairs = []
    free = list(range(4))
    for k in np.argsort(-weight.max(axis=0)):
        axis = max(free, key=lambda a: weight[a, k])
        free.remove(axis)
        pairs.append(RicciEigenpair(float(vals[k]), vecs[:, k], axis))
    return sorted(pairs, key=lambda e: e.axis)


def self_dual_part(comps: np.ndarray, E: np.ndarray) -> np.ndarray:
    """Coordinates of the Lambda+ component of a 2-form on the standard Lambda+ basis."""
    return LAMBDA_PLUS.T @ form_to_frame(comps, E)


def kahler_weyl_model(omega_plus: np.ndarray, factor: float) -> np.ndarray:
    """``factor * (3/2 w ⊗ w - Id)`` on Lambda+ with ``w`` rescaled to ``|w|^2 = 2``."""
    w = np.asarray(omega_plus, dtype=float)
    w = w * np.sqrt(2.0) / np.linalg.norm(w) if np.linalg.norm(w) > 0 else w
    return factor * (1.5 * np.outer(w, w) - np.eye(3))


def w_plus_residual(pack: CurvaturePack, omega_plus: np.ndarray, factor: float,
                    floor: float = 1e-300) -> float:
    """Relative Frobenius distance between ``pack.w_plus`` and the Kähler-type model."""
    model = kahler_weyl_model(omega_plus, factor)
    diff = np.linalg.norm(pack.w_plus - model)
    return float(diff / max(np.linalg.norm(model), floor)) if factor != 0 else float(diff)


def w_plus_check_g_minus(geometry, p) -> float:
    """Compare ``W+`` of ``g-`` with ``8 m (r-m)^2/(r+m)^3 (3/2 w ⊗ w - Id)``.

    ``w`` is the self-dual form ``-m dr ^ s1 + (r^2 - m^2) s2 ^ s3`` (self-dual
    in the Taub-NUT chart orientation), normalised to ``|w|^2 = 2`` in ``g-``.
    """
    p = np.asarray(p, dtype=float)
    m, r = geometry.m, p[0]
    pack = curvature_pack(geometry.g_minus, p, geometry.unit_coframe(geometry.g_minus))
    omega = self_dual_part(np.asarray(geometry.omega_minus(p)), pack.coframe)
    factor = 8 * m * (r - m) ** 2 / (r + m) ** 3
    return w_plus_residual(pack, omega, factor)
