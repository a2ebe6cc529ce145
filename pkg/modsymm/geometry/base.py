from abc import ABC, abstractmethod

import numpy as np
from numpy.typing import ArrayLike, NDArray

from modsymm.config import settings
from modsymm.core.exceptions import GeometryError, InputError

# Smallest admissible speed |gamma'(t)| at sampled nodes
MIN_SPEED = 1e-8


class BoundaryCurve(ABC):
    """
    Abstract base class for analytic, 2*pi-periodic closed boundary curves.

    Implementations supply the parameterization gamma(t) and its exact
    derivative in closed form. Positions and velocities are returned with a
    trailing axis of length 2 (x, y), so any array of angles may be passed.
    Instances are immutable after construction.
    """

    label: str

    @abstractmethod
    def position(self, t: ArrayLike) -> NDArray[np.float64]:
        """
        Return gamma(t) with shape t.shape + (2,).
        """

    @abstractmethod
    def velocity(self, t: ArrayLike) -> NDArray[np.float64]:
        """
        Return gamma'(t) with shape t.shape + (2,).
        """

    def speed(self, t: ArrayLike) -> NDArray[np.float64] | float:
        """Return |gamma'(t)|, the density transform weight."""
        speed = np.linalg.norm(self.velocity(t), axis=-1)
        return float(speed) if np.ndim(speed) == 0 else speed

    def boundary_length(self, node_count: int | None = None) -> float:
        """
        Total arc length by the composite trapezoidal rule.

        The integrand is analytic and periodic, so the rule converges
        geometrically; the default node count is far past machine precision
        for the builtin curves.
        """
        node_count = settings.GEOMETRY_NODES if node_count is None else node_count
        if node_count < 4 or node_count % 2:
            raise InputError(
                f"Boundary length needs an even node count >= 4, got {node_count}."
            )
        t = 2.0 * np.pi * np.arange(node_count) / node_count
        return float(2.0 * np.pi / node_count * np.sum(self.speed(t)))

    def validate(self, node_count: int | None = None) -> None:
        """
        Check regularity |gamma'(t)| > 0 at uniform nodes.

        Simplicity of the curve is assumed, not verified.
        """
        node_count = settings.GEOMETRY_NODES if node_count is None else node_count
        t = 2.0 * np.pi * np.arange(node_count) / node_count
        speed = self.speed(t)
        worst = int(np.argmin(speed))
        if speed[worst] < MIN_SPEED:
            raise GeometryError(
                f"Curve '{self.label}' is not regular: |gamma'({t[worst]:.6f})| = "
                f"{speed[worst]:.3e}."
            )

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.label!r})"


class ShiftedCurve(BoundaryCurve):
    """The same curve traversed from a shifted start, t -> t + shift."""

    def __init__(self, curve: BoundaryCurve, shift: float):
        self.curve = curve
        self.shift = float(shift)
        self.label = f"{curve.label}+{self.shift:g}"

    def position(self, t: ArrayLike) -> NDArray[np.float64]:
        return self.curve.position(np.asarray(t, dtype=float) + self.shift)

    def velocity(self, t: ArrayLike) -> NDArray[np.float64]:
        return self.curve.velocity(np.asarray(t, dtype=float) + self.shift)
