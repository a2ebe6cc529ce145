"""
Exterior field of a solved density.

    u(x) = -(scale/2pi) int (Psi(s) - M |gamma'(s)|) ln|x - gamma(s)| ds + scale M

with M the mean value of the density. The integrand is smooth off the
boundary and is integrated by the trapezoidal rule.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from modsymm.bie.kernel import KernelParts, mean_value
from modsymm.bie.trig import TrigPoly
from modsymm.config import settings
from modsymm.core.exceptions import DomainError, InputError
from modsymm.geometry.base import BoundaryCurve

# Beyond this multiple of the curve radius ln|x - y| is expanded around ln|x|
FAR_FIELD_FACTOR = 10.0
# Distance to a boundary sample treated as lying on the curve
ON_BOUNDARY_TOLERANCE = 1e-12


def winding_number(
    curve: BoundaryCurve, points: ArrayLike, samples: Optional[int] = None
) -> NDArray[np.float64]:
    """Winding number of the sampled boundary polygon around each point."""
    samples = settings.WINDING_SAMPLES if samples is None else samples
    points = np.atleast_2d(np.asarray(points, dtype=float))
    polygon = curve.position(2.0 * np.pi * np.arange(samples) / samples)
    z = (polygon[None, :, 0] - points[:, None, 0]) + 1j * (
        polygon[None, :, 1] - points[:, None, 1]
    )
    turns = np.angle(np.roll(z, -1, axis=1) / z)
    return np.sum(turns, axis=1) / (2.0 * np.pi)


def ensure_exterior(curve: BoundaryCurve, points: ArrayLike) -> NDArray[np.float64]:
    """Return points as an (m, 2) array, or raise DomainError naming the first bad one."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[-1] != 2:
        raise InputError(f"Expected plane points, got shape {points.shape}.")
    polygon = curve.position(
        2.0 * np.pi * np.arange(settings.WINDING_SAMPLES) / settings.WINDING_SAMPLES
    )
    distance = np.min(
        np.linalg.norm(points[:, None, :] - polygon[None, :, :], axis=-1), axis=1
    )
    on_boundary = distance <= ON_BOUNDARY_TOLERANCE * max(1.0, np.abs(polygon).max())
    inside = np.zeros(len(points), dtype=bool)
    inside[~on_boundary] = (
        np.abs(winding_number(curve, points[~on_boundary])) > 0.5
    )
    bad = np.flatnonzero(on_boundary | inside)
    if bad.size:
        x, y = points[bad[0]]
        where = "on" if on_boundary[bad[0]] else "inside"
        raise DomainError(
            f"Point ({x:.6g}, {y:.6g}) lies {where} the boundary of {curve.label}."
        )
    return points


@dataclass(frozen=True, eq=False)
class ExteriorField:
    """
    Modified single-layer potential of ``density`` on the curve of ``kernel``.

    Boundary samples and trapezoid weights are computed once.
    """

    kernel: KernelParts
    density: TrigPoly
    quadrature_points: Optional[int] = None
    _boundary: NDArray[np.float64] = field(init=False, repr=False)
    _weights: NDArray[np.float64] = field(init=False, repr=False)
    _mean: float = field(init=False, repr=False)

    def __post_init__(self):
        n = self.density.n
        points = self.quadrature_points
        if points is None:
            points = max(4 * n, settings.POTENTIAL_MIN_NODES)
        if points < 4 * n:
            raise InputError(
                f"A degree-{n} density needs at least {4 * n} quadrature points, got {points}."
            )
        s = 2.0 * np.pi * np.arange(points) / points
        curve = self.kernel.curve
        weights = (
            self.density(s) - mean_value(self.kernel, self.density) * curve.speed(s)
        ) * (2.0 * np.pi / points)
        # The moment vanishes exactly; removing the rounding keeps ln|x| out of u
        weights = weights - weights.mean()

        object.__setattr__(self, "quadrature_points", points)
        object.__setattr__(self, "_boundary", curve.position(s))
        object.__setattr__(self, "_weights", weights)
        object.__setattr__(self, "_mean", mean_value(self.kernel, self.density))

    @property
    def scale(self) -> float:
        return self.kernel.convention.scale

    def __call__(self, x: ArrayLike):
        return evaluate(self, x)


def evaluate(field: ExteriorField, x: ArrayLike) -> NDArray[np.float64] | float:
    """u at one point (shape (2,)) or at many (shape (m, 2))."""
    points = ensure_exterior(field.kernel.curve, x)
    y = field._boundary
    radius2 = np.sum(points**2, axis=-1)
    reach = FAR_FIELD_FACTOR * np.abs(y).max()
    far = radius2 > reach**2

    logs = np.empty((len(points), len(y)))
    diff = points[~far, None, :] - y[None, :, :]
    logs[~far] = 0.5 * np.log(np.sum(diff**2, axis=-1))
    # ln|x - y| - ln|x| = (1/2) log1p((|y|^2 - 2 x.y) / |x|^2); the ln|x| part
    # integrates to zero against the weights
    shift = np.sum(y**2, axis=-1)[None, :] - 2.0 * points[far] @ y.T
    logs[far] = 0.5 * np.log1p(shift / radius2[far, None])

    u = -(field.scale / (2.0 * np.pi)) * (logs @ field._weights) + field.scale * field._mean
    if np.ndim(x) == 1:
        return float(u[0])
    return u


def far_field(field: ExteriorField) -> float:
    """u_inf = scale * M."""
    return field.scale * field._mean


def near_boundary_grid() -> NDArray[np.float64]:
    """The 20x20 grid x_ij = (0.1 + i, 1.1 + j), i, j = 1..20."""
    i, j = np.meshgrid(np.arange(1, 21), np.arange(1, 21), indexing="ij")
    return np.stack([0.1 + i.ravel(), 1.1 + j.ravel()], axis=-1).astype(float)


def err_grid(
    reference: ExteriorField,
    approx: ExteriorField,
    grid: Optional[ArrayLike] = None,
) -> float:
    """Maximum |u_approx - u_reference| over the grid."""
    points = near_boundary_grid() if grid is None else np.atleast_2d(np.asarray(grid, dtype=float))
    ensure_exterior(reference.kernel.curve, points)
    ensure_exterior(approx.kernel.curve, points)
    return float(np.max(np.abs(evaluate(approx, points) - evaluate(reference, points))))
