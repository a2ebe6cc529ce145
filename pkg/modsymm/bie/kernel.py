"""
The modified Symm kernel and its split into a pure logarithmic part, the
smooth remainder k(t, s) and the curve-dependent term g3(t).

All formulas are written for the doubled scaling, prefactor -1/pi and
additive 2/|dOmega|. The classic scaling (-1/(2*pi), 1/|dOmega|) is exactly
half of it, which ``Convention.relative`` applies.
"""

import enum
import threading
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from numpy.typing import ArrayLike, NDArray

from modsymm.bie.trig import NodalValues, TrigPoly, interpolate, nodes
from modsymm.config import settings
from modsymm.core.exceptions import DomainError
from modsymm.geometry.base import BoundaryCurve


class Convention(str, enum.Enum):
    CLASSIC = "classic"
    DOUBLED = "doubled"

    @property
    def scale(self) -> float:
        """Numerator of the log prefactor scale/(2*pi) and of the additive scale/|dOmega|."""
        return 1.0 if self is Convention.CLASSIC else 2.0

    @property
    def relative(self) -> float:
        """Factor relative to the doubled operator."""
        return self.scale / 2.0

    def __str__(self) -> str:
        return self.value


def wrap_angle(d: ArrayLike) -> NDArray[np.float64]:
    """Map angle differences into [-pi, pi)."""
    return np.mod(np.asarray(d, dtype=float) + np.pi, 2.0 * np.pi) - np.pi


def doubled_smooth_kernel(
    curve: BoundaryCurve, t: ArrayLike, s: ArrayLike
) -> NDArray[np.float64] | float:
    """
    k(t, s) = -(1/2pi) ln(|gamma(t) - gamma(s)|^2 / (4 sin^2((t - s)/2))).

    The removable singularity is replaced by the analytic diagonal
    k(t, t) = -(1/pi) ln|gamma'(t)|. Within NEAR_DIAGONAL_THRESHOLD the
    diagonal is taken at the midpoint, which is second order accurate since
    k is symmetric.
    """
    t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    shape = t.shape
    t, s = t.ravel(), s.ravel()
    h = wrap_angle(t - s)
    near = np.abs(h) < settings.NEAR_DIAGONAL_THRESHOLD
    far = ~near

    out = np.empty(t.shape)
    chord = curve.position(t[far]) - curve.position(s[far])
    ratio = np.sum(chord**2, axis=-1) / (4.0 * np.sin(h[far] / 2.0) ** 2)
    out[far] = -np.log(ratio) / (2.0 * np.pi)
    midpoint = s[near] + h[near] / 2.0
    out[near] = -np.log(np.linalg.norm(curve.velocity(midpoint), axis=-1)) / np.pi

    out = out.reshape(shape)
    return float(out) if out.ndim == 0 else out


def g1_log_kernel(t: ArrayLike, s: ArrayLike) -> NDArray[np.float64] | float:
    """
    Raw singular factor ln(4 sin^2((t - s)/2)).

    Only quadrature weights and test oracles consume it; it is never
    integrated by a plain rule.
    """
    h = wrap_angle(np.subtract(t, s))
    if np.any(np.abs(h) < 1e-14):
        raise DomainError("The logarithmic kernel is singular at t = s.")
    value = np.log(4.0 * np.sin(h / 2.0) ** 2)
    return float(value) if np.ndim(value) == 0 else value


def build_g3(
    curve: BoundaryCurve,
    convention: Convention,
    n: int,
    boundary_length: float | None = None,
) -> TrigPoly:
    """
    The s-independent kernel term as an element of X_n.

    g3(t) = -(1/|dOmega|) S_K|gamma'|(t) + scale/|dOmega|, i.e. 2 G3(t) under
    the doubled scaling and G3(t) under the classic one. S_K|gamma'| is
    discretized at max(G3_REFERENCE_DEGREE, 4n), sampled at the degree-n
    nodes and interpolated, so the nodal values used by the assembled
    operator carry no degree-n truncation of the speed function.
    """
    # quadrature imports this module, so the dependency is resolved late
    from modsymm.bie.quadrature import sk_matrix

    length = curve.boundary_length() if boundary_length is None else boundary_length
    degree = max(settings.G3_REFERENCE_DEGREE, 4 * n)
    speed = curve.speed(nodes(degree))
    single_layer = sk_matrix(curve, convention, degree, nodes(n)) @ speed
    samples = -single_layer / length + convention.scale / length
    return interpolate(NodalValues(n, samples))


@dataclass(frozen=True, eq=False)
class KernelParts:
    """
    Precomputed pieces of the modified Symm kernel for one curve and scaling.

    ``g3`` is built at ``degree``; other degrees are built on request through
    ``g3_at`` and memoized.
    """

    curve: BoundaryCurve
    convention: Convention
    boundary_length: float
    degree: int
    speed_samples: NDArray[np.float64]
    g3: TrigPoly
    _g3_cache: Dict[int, TrigPoly] = field(default_factory=dict, repr=False)
    _g3_lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.boundary_length <= 0:
            raise DomainError(
                f"Boundary length must be positive, got {self.boundary_length}."
            )
        self._g3_cache.setdefault(self.degree, self.g3)

    def g3_at(self, n: int) -> TrigPoly:
        # sweeps share one KernelParts across worker threads
        with self._g3_lock:
            g3 = self._g3_cache.get(n)
            if g3 is None:
                g3 = build_g3(self.curve, self.convention, n, self.boundary_length)
                self._g3_cache[n] = g3
            return g3


def build_kernel_parts(
    curve: BoundaryCurve,
    convention: Convention = Convention.DOUBLED,
    n: int = 16,
) -> KernelParts:
    length = curve.boundary_length()
    return KernelParts(
        curve=curve,
        convention=convention,
        boundary_length=length,
        degree=n,
        speed_samples=curve.speed(nodes(n)),
        g3=build_g3(curve, convention, n, length),
    )


def smooth_kernel(parts: KernelParts, t: ArrayLike, s: ArrayLike):
    """Smooth remainder k(t, s) under the parts' scaling."""
    return parts.convention.relative * doubled_smooth_kernel(parts.curve, t, s)


def full_kernel(parts: KernelParts, t: ArrayLike, s: ArrayLike, n: int | None = None):
    """
    G(t, s) = relative * (-(1/2pi) ln 4 sin^2((t-s)/2) + k(t, s)) + g3(t), t != s.

    The pure log part and k together form -(scale/2pi) ln|gamma(t) - gamma(s)|.
    """
    g3 = parts.g3 if n is None else parts.g3_at(n)
    singular = -np.asarray(g1_log_kernel(t, s)) / (2.0 * np.pi)
    smooth = np.asarray(doubled_smooth_kernel(parts.curve, t, s))
    value = parts.convention.relative * (singular + smooth) + g3(
        np.broadcast_to(np.asarray(t, dtype=float), np.shape(singular))
    )
    return float(value) if np.ndim(value) == 0 else value


def mean_value(parts: KernelParts, density: TrigPoly) -> float:
    """
    Mean value M = (1/|dOmega|) int_0^{2pi} Psi(s) ds = 2*pi*a_0/|dOmega|.

    Psi already carries the speed factor, so no surface measure is applied.
    """
    return float(2.0 * np.pi * density.a[0] / parts.boundary_length)
