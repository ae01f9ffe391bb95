"""Closed-form and one-dimensional reference values for the model domains.

Nothing here uses the package's form calculus: every value is either a
hand-derived closed form or a 1-D ``scipy.integrate.quad`` of a radial
profile, so it can serve as an oracle for the 4-D quadrature harness.

Radial bookkeeping in R^4: ``dVol = 2 pi^2 r^3 dr`` and the 3-sphere of
radius ``R`` has area ``2 pi^2 R^3``.  For ``f = c r^-2 + const`` one has
``|df|^2 = 4 c^2 r^-6`` and ``|dJdf|^2 = 32 c^2 r^-8``; a round sphere with
outward normal has Levi value ``L(J eta, eta) = 1/R``.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

S3_AREA = 2 * np.pi ** 2


def _radial(fn, a, b):
    val, _ = quad(lambda r: fn(r) * S3_AREA * r ** 3, a, b, epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def annulus_constant(a: float, b: float) -> float:
    """``c = 1/(a^-2 - b^-2)`` in ``f = c (r^-2 - b^-2)``."""
    return 1.0 / (a ** -2 - b ** -2)


def annulus_lhs(a: float, b: float) -> float:
    """``2 ∫ |ddbar f|^2 = 1/2 ∫ |dJdf|^2 = 8 pi^2 c^2 (a^-4 - b^-4)``."""
    c = annulus_constant(a, b)
    return 8 * np.pi ** 2 * c ** 2 * (a ** -4 - b ** -4)


def annulus_lhs_quad(a: float, b: float) -> float:
    c = annulus_constant(a, b)
    return _radial(lambda r: 0.5 * 32 * c ** 2 * r ** -8, a, b)


def annulus_rhs_parts(a: float, b: float) -> dict:
    """Contributions ``-∫_S L(*(Jdf ^ df)) dA`` of the outer and inner spheres.

    The outer sphere (outward normal away from 0) is pseudoconvex, the inner
    one (outward normal towards 0) pseudoconcave; the density is
    ``|df|^2 L(J eta, eta)``.
    """
    c = annulus_constant(a, b)
    out = -(4 * c ** 2 * b ** -6) * (1.0 / b) * S3_AREA * b ** 3
    inn = -(4 * c ** 2 * a ** -6) * (-1.0 / a) * S3_AREA * a ** 3
    return {"outer": out, "inner": inn}


def annulus_rhs(a: float, b: float) -> float:
    return sum(annulus_rhs_parts(a, b).values())


def annulus_capacity(a: float, b: float) -> float:
    """``∫ |df|^2 = 4 pi^2 / (a^-2 - b^-2)``."""
    return 4 * np.pi ** 2 * annulus_constant(a, b)


def annulus_capacity_quad(a: float, b: float) -> float:
    c = annulus_constant(a, b)
    return _radial(lambda r: (2 * c * r ** -3) ** 2, a, b)


def ball_volume(R: float = 1.0) -> float:
    return 0.5 * np.pi ** 2 * R ** 4


def ball_square_norm_terms(R: float = 1.0) -> dict:
    """Terms of ``4∫|ddbar f|^2 = ∫(Lap f)^2 - ∫_S Jdf ^ dJdf`` for ``f = |z|^2``.

    ``dJdf = -4 omega`` so ``|dJdf|^2 = 32``; ``Lap f = 8``; on the sphere
    ``Jdf ^ dJdf`` integrates to ``16 pi^2 R^4``.
    """
    vol = ball_volume(R)
    return {"lhs": 32 * vol, "laplacian_sq": 64 * vol, "boundary": 16 * np.pi ** 2 * R ** 4}


def sphere_levi_value(R: float) -> float:
    return 1.0 / R
