"""Tensor-product quadrature over parameter boxes mapped into a chart.

Periodic axes always use the equispaced trapezoid rule (spectrally accurate
for smooth periodic integrands), with their own, smaller node count.  Aperiodic axes use Gauss-Legendre or the
composite midpoint rule.  Every integral is evaluated on
``refinement_levels`` successively doubled grids; the spread between the last
levels gives the error estimate, and for the midpoint rule the levels are
combined by Richardson extrapolation.

Points are processed in fixed-size chunks in a fixed order and each chunk is
reduced with NumPy's pairwise summation, so results are bit-reproducible for
a given configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Callable

import jax
import jax.numpy as jnp
import numpy as np

from .errors import ChartOverflow, QuadratureDiverged
from .fields import Field, MetricField

CHUNK = 16384  # fixed batch shape: one compilation per integrand across levels
SCHEMES = ("gauss", "midpoint", "trapezoid-periodic")


@dataclass(frozen=True)
class Box:
    """Parameter box of dimension 3 or 4 with an optional map into chart coordinates."""

    ranges: tuple
    periodic: tuple
    to_chart: Callable | None = None
    name: str = ""

    def __post_init__(self):
        if len(self.ranges) != len(self.periodic):
            raise ValueError("ranges and periodic flags differ in length")
        for lo, hi in self.ranges:
            if not lo < hi:
                raise ValueError(f"degenerate parameter range [{lo}, {hi}]")

    @property
    def dim(self) -> int:
        return len(self.ranges)

    def map(self, u):
        return u if self.to_chart is None else self.to_chart(u)

    def grid(self, n: int) -> np.ndarray:
        """Coarse uniform grid including the box corners, for sanity checks."""
        axes = [np.linspace(lo, hi, n) for lo, hi in self.ranges]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


@dataclass(frozen=True)
class Quadrature:
    """Nodes per aperiodic axis (``resolution``) and per periodic axis
    (``periodic_resolution``, default ``min(resolution, 4)``; the trapezoid
    rule is exact there for trigonometric polynomials of lower degree); both double at
    each of the ``refinement_levels`` levels."""

    scheme: str = "gauss"
    resolution: int = 48
    refinement_levels: int = 2
    periodic_resolution: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.resolution < 1 or self.refinement_levels < 1:
            raise ValueError("resolution and refinement_levels must be positive")
        if self.periodic_resolution is not None and self.periodic_resolution < 1:
            raise ValueError("periodic_resolution must be positive")

    @property
    def periodic_nodes(self) -> int:
        return min(self.resolution, 4) if self.periodic_resolution is None else self.periodic_resolution

    def refined(self, times: int = 1) -> "Quadrature":
        return Quadrature(self.scheme, self.resolution * 2 ** times, self.refinement_levels,
                          self.periodic_nodes * 2 ** times)

    def level_resolutions(self) -> list[tuple[int, int]]:
        """``(aperiodic, periodic)`` node counts for each level."""
        return [(self.resolution * 2 ** k, self.periodic_nodes * 2 ** k)
                for k in range(self.refinement_levels)]


@dataclass(frozen=True)
class Integral:
    value: float
    error: float
    levels: tuple = ()


def rule(lo: float, hi: float, n: int, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """1-D nodes and weights on [lo, hi]."""
    width = hi - lo
    if kind == "gauss":
        x, w = np.polynomial.legendre.leggauss(n)
        return lo + 0.5 * width * (x + 1.0), 0.5 * width * w
    if kind == "midpoint":
        return lo + width * (np.arange(n) + 0.5) / n, np.full(n, width / n)
    if kind == "trapezoid-periodic":
        return lo + width * np.arange(n) / n, np.full(n, width / n)
    raise ValueError(f"unknown rule {kind!r}")


def _axis_rules(box: Box, n: tuple[int, int], scheme: str):
    rules = []
    for (lo, hi), per in zip(box.ranges, box.periodic):
        if scheme == "trapezoid-periodic" and not per:
            raise ValueError("trapezoid-periodic scheme requires every axis to be periodic")
        rules.append(rule(lo, hi, n[1], "trapezoid-periodic") if per else rule(lo, hi, n[0], scheme))
    return rules


def tensor_sum(batched: Callable, rules) -> float:
    """Weighted sum of ``batched`` over the tensor grid, in fixed chunk order."""
    nodes = [r[0] for r in rules]
    weights = [r[1] for r in rules]
    shape = tuple(len(n) for n in nodes)
    total = prod(shape)
    size = CHUNK
    partial = []
    for start in range(0, total, size):
        idx = np.arange(start, start + size)
        valid = idx < total
        idx = np.where(valid, idx, 0)
        multi = np.unravel_index(idx, shape)
        U = np.stack([nodes[a][multi[a]] for a in range(len(shape))], axis=1)
        W = np.prod([weights[a][multi[a]] for a in range(len(shape))], axis=0) * valid
        vals = np.asarray(batched(U))
        if not np.all(np.isfinite(vals[valid])):
            raise QuadratureDiverged("integrand is not finite at a quadrature node")
        partial.append(np.sum(np.where(valid, vals, 0.0) * W))
    return float(np.sum(np.array(partial)))


def combine_levels(values: list[float], scheme: str) -> Integral:
    values = list(values)
    if len(values) == 1:
        return Integral(values[0], float("nan"), tuple(values))
    diffs = [abs(b - a) for a, b in zip(values, values[1:])]
    scale = max(1.0, max(abs(v) for v in values))
    floor = 1e-12 * scale
    if len(diffs) >= 2 and diffs[-1] > diffs[-2] and diffs[-1] > floor:
        raise QuadratureDiverged(
            f"error estimate grew under refinement: {diffs[-2]:.3e} -> {diffs[-1]:.3e}")
    if scheme == "midpoint":
        rich = [(4 * b - a) / 3 for a, b in zip(values, values[1:])]
        err = abs(rich[-1] - rich[-2]) if len(rich) >= 2 else diffs[-1] / 3
        return Integral(rich[-1], err, tuple(values))
    return Integral(values[-1], diffs[-1], tuple(values))


def integrate_box(fn: Callable, box: Box, q: Quadrature) -> Integral:
    """Integrate a JAX-traceable ``fn(u)`` over the parameter box (no measure added)."""
    batched = jax.jit(jax.vmap(fn))
    values = [tensor_sum(batched, _axis_rules(box, n, q.scheme)) for n in q.level_resolutions()]
    return combine_levels(values, q.scheme)


def _scalar_fn(density):
    return density.fn if isinstance(density, Field) else density


def _check_image(box: Box, chart, n: int = 6) -> None:
    pts = np.asarray(jax.vmap(box.map)(box.grid(n)))
    if not chart.contains(pts, tol=1e-9 * chart.scale):
        raise ChartOverflow(f"parameterization {box.name!r} leaves chart {chart.name!r}")


def integrate_domain(g: MetricField, field, region: Box, q: Quadrature) -> Integral:
    """``∫ field dVol_g`` over the image of ``region`` in the chart of ``g``."""
    if region.dim != 4:
        raise ValueError("domain regions are 4-dimensional")
    _check_image(region, g.chart)
    f = _scalar_fn(field)

    def integrand(u):
        x = region.map(u)
        jac = 1.0 if region.to_chart is None else jnp.abs(jnp.linalg.det(jax.jacfwd(region.map)(u)))
        return f(x) * jnp.sqrt(jnp.linalg.det(g.fn(x))) * jac

    return integrate_box(integrand, region, q)


def area_element_fn(gfn: Callable, patch: Callable, u):
    x = patch(u)
    P = jax.jacfwd(patch)(u)
    return jnp.sqrt(jnp.linalg.det(P.T @ gfn(x) @ P))


def integrate_hypersurface(g: MetricField, density, V, q: Quadrature) -> Integral:
    """``∫_V density dA`` with ``dA`` the induced Riemannian area form.

    ``V`` provides ``patch`` (a map from its 3-dimensional parameter box
    into the chart) and ``box``.
    """
    box = V.box
    if box.dim != 3:
        raise ValueError("hypersurface patches are 3-dimensional")
    patch_box = Box(box.ranges, box.periodic, V.patch, box.name)
    _check_image(patch_box, g.chart)
    f = _scalar_fn(density)

    def integrand(u):
        return f(V.patch(u)) * area_element_fn(g.fn, V.patch, u)

    return integrate_box(integrand, box, q)
