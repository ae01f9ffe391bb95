"""Pointwise exterior algebra on a 4-dimensional cotangent space.

A k-form value is stored as its coefficients in the basis
``dx^I = dx^{i1} ^ ... ^ dx^{ik}`` with ``I`` running over increasing index
tuples in lexicographic order.  For 2-forms that order is
(01, 02, 03, 12, 13, 23).  Leading array axes are batch axes, so every
routine here works on a single point or on a stack of points, and on both
NumPy arrays and traced JAX arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

import jax.numpy as jnp
import numpy as np

from .errors import DegreeError

DIM = 4
BASIS = {k: tuple(itertools.combinations(range(DIM), k)) for k in range(DIM + 1)}
INDEX = {k: {idx: n for n, idx in enumerate(BASIS[k])} for k in BASIS}
RANK = {k: len(BASIS[k]) for k in BASIS}

TWO_FORM_LABELS = ("01", "02", "03", "12", "13", "23")


def permutation_sign(seq) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _wedge_tensor(j: int, k: int) -> np.ndarray:
    out = np.zeros((RANK[j], RANK[k], RANK[j + k]))
    for a, I in enumerate(BASIS[j]):
        for b, J in enumerate(BASIS[k]):
            s = permutation_sign(I + J)
            if s:
                out[a, b, INDEX[j + k][tuple(sorted(I + J))]] = s
    return out


def _d_tensor(k: int) -> np.ndarray:
    # (d alpha)_K = sum_t (-1)^t d_{K_t} alpha_{K without K_t}
    out = np.zeros((RANK[k + 1], RANK[k], DIM))
    for c, K in enumerate(BASIS[k + 1]):
        for t, axis in enumerate(K):
            rest = K[:t] + K[t + 1:]
            out[c, INDEX[k][rest], axis] = (-1) ** t
    return out


def _star_tensor(k: int) -> np.ndarray:
    out = np.zeros((RANK[DIM - k], RANK[k]))
    for a, I in enumerate(BASIS[k]):
        J = tuple(i for i in range(DIM) if i not in I)
        out[INDEX[DIM - k][J], a] = permutation_sign(I + J)
    return out


_WEDGE = {(j, k): _wedge_tensor(j, k)
          for j in range(DIM + 1) for k in range(DIM + 1) if j + k <= DIM}
_D = {k: _d_tensor(k) for k in range(DIM)}
_STAR = {k: _star_tensor(k) for k in range(DIM + 1)}

_I2 = np.array(BASIS[2])


@dataclass(frozen=True)
class Form:
    """A k-form value (or a batch of them)."""

    degree: int
    comps: Any

    def __post_init__(self):
        if not 0 <= self.degree <= DIM:
            raise DegreeError(f"degree {self.degree} outside 0..{DIM}")
        if jnp.shape(self.comps)[-1:] != (RANK[self.degree],):
            raise ValueError(
                f"{self.degree}-form needs {RANK[self.degree]} components, "
                f"got shape {jnp.shape(self.comps)}")

    def _check(self, other: "Form"):
        if not isinstance(other, Form) or other.degree != self.degree:
            raise DegreeError("forms of different degree cannot be added")

    def __add__(self, other):
        self._check(other)
        return Form(self.degree, self.comps + other.comps)

    def __sub__(self, other):
        self._check(other)
        return Form(self.degree, self.comps - other.comps)

    def __neg__(self):
        return Form(self.degree, -self.comps)

    def __mul__(self, scalar):
        return Form(self.degree, self.comps * jnp.asarray(scalar)[..., None])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Form(self.degree, self.comps / jnp.asarray(scalar)[..., None])

    def __xor__(self, other):
        return wedge(self, other)

    def numpy(self) -> "Form":
        return Form(self.degree, np.asarray(self.comps))

    def matrix(self):
        """Antisymmetric coefficient matrix ``F`` with ``phi = 1/2 F_ij dx^i dx^j``."""
        if self.degree != 2:
            raise DegreeError("matrix() is defined for 2-forms only")
        return two_form_matrix(self.comps)

    @classmethod
    def from_matrix(cls, F) -> "Form":
        return cls(2, two_form_comps(F))


def dx(*indices: int) -> Form:
    """Coordinate basis form, e.g. ``dx(0, 1)`` for dx^0 ^ dx^1 (any index order)."""
    k = len(indices)
    comps = np.zeros(RANK[k])
    s = permutation_sign(indices)
    if s:
        comps[INDEX[k][tuple(sorted(indices))]] = s
    return Form(k, comps)


def one_form(comps) -> Form:
    return Form(1, comps)


def two_form_matrix(comps):
    comps = jnp.asarray(comps)
    F = jnp.zeros(comps.shape[:-1] + (DIM, DIM), dtype=comps.dtype)
    F = F.at[..., _I2[:, 0], _I2[:, 1]].set(comps)
    return F - jnp.swapaxes(F, -1, -2)


def two_form_comps(F):
    F = jnp.asarray(F)
    return F[..., _I2[:, 0], _I2[:, 1]]


def wedge(a: Form, b: Form) -> Form:
    if a.degree + b.degree > DIM:
        raise DegreeError(f"wedge of degrees {a.degree}+{b.degree} exceeds {DIM}")
    T = _WEDGE[(a.degree, b.degree)]
    comps = jnp.einsum("...a,...b,abc->...c", a.comps, b.comps, T)
    return Form(a.degree + b.degree, comps)


def d_from_jacobian(jac, degree: int):
    """Components of d(alpha) from ``jac[..., c, i] = d_i alpha_c``."""
    if degree >= DIM:
        raise DegreeError(f"d of a {degree}-form vanishes identically in dimension {DIM}")
    return jnp.einsum("...ci,Kci->...K", jac, _D[degree])


def compound(A, k: int):
    """k-th compound matrix: determinants of all k x k minors of ``A``."""
    A = jnp.asarray(A)
    if k == 0:
        return jnp.ones(A.shape[:-2] + (1, 1), dtype=A.dtype)
    I = np.array(BASIS[k])
    sub = A[..., I[:, None, :, None], I[None, :, None, :]]
    return jnp.linalg.det(sub)


def raise_indices(g, a: Form):
    """Contravariant components of ``a`` in the same index-tuple basis."""
    return jnp.einsum("...IJ,...J->...I", compound(jnp.linalg.inv(g), a.degree), a.comps)


def inner(g, a: Form, b: Form):
    """Pointwise metric inner product; ``|dx^0 ^ dx^1| = 1`` for an orthonormal coframe."""
    if a.degree != b.degree:
        raise DegreeError("inner product of forms of different degree")
    return jnp.sum(a.comps * raise_indices(g, b), axis=-1)


def norm_sq(g, a: Form):
    return inner(g, a, a)


def hodge_star(g, a: Form, orientation: int = 1) -> Form:
    """Hodge star with ``alpha ^ *beta = <alpha, beta> dVol``."""
    vol = jnp.sqrt(jnp.linalg.det(g))
    raised = raise_indices(g, a)
    comps = jnp.einsum("JI,...I->...J", _STAR[a.degree], raised)
    return Form(DIM - a.degree, orientation * vol[..., None] * comps)


def volume_form(g, orientation: int = 1) -> Form:
    return Form(4, orientation * jnp.sqrt(jnp.linalg.det(g))[..., None])


def apply_endomorphism(Jm, eta: Form) -> Form:
    """``(J eta)(X) = eta(J X)`` for an endomorphism with ``J d_i = Jm[k, i] d_k``."""
    if eta.degree != 1:
        raise DegreeError("J acts on 1-forms")
    return Form(1, jnp.einsum("...ki,...k->...i", Jm, eta.comps))
