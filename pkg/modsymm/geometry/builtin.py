import numpy as np
from numpy.typing import ArrayLike, NDArray

from modsymm.core.exceptions import ConfigurationError
from modsymm.geometry.base import BoundaryCurve


def _stack(x: NDArray, y: NDArray) -> NDArray[np.float64]:
    return np.stack([x, y], axis=-1)


class Circle(BoundaryCurve):
    """Circle of radius a centred at the origin: a (cos t, sin t)."""

    name = "circle"

    def __init__(self, radius: float = 1.0):
        if radius <= 0:
            raise ConfigurationError(f"Circle radius must be positive, got {radius}.")
        self.radius = float(radius)
        self.label = f"circle({self.radius:g})"

    def position(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        return self.radius * _stack(np.cos(t), np.sin(t))

    def velocity(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        return self.radius * _stack(-np.sin(t), np.cos(t))


class Ellipse(BoundaryCurve):
    """Axis-aligned ellipse (a cos t, b sin t)."""

    name = "ellipse"

    def __init__(self, a: float = 1.0, b: float = 2.0):
        if a <= 0 or b <= 0:
            raise ConfigurationError(
                f"Ellipse semi-axes must be positive, got ({a}, {b})."
            )
        self.a = float(a)
        self.b = float(b)
        self.label = f"ellipse({self.a:g},{self.b:g})"

    def position(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        return _stack(self.a * np.cos(t), self.b * np.sin(t))

    def velocity(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        return _stack(-self.a * np.sin(t), self.b * np.cos(t))


class ExpBlob(BoundaryCurve):
    """
    Exponential blob (e^{-1 + cos t}, 2 e^{-1 + sin t}).

    The whole curve lies in the open first quadrant, so the origin is an
    exterior point.
    """

    name = "expblob"

    def __init__(self):
        self.label = "expblob"

    def position(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        return _stack(np.exp(-1.0 + np.cos(t)), 2.0 * np.exp(-1.0 + np.sin(t)))

    def velocity(self, t: ArrayLike) -> NDArray[np.float64]:
        t = np.asarray(t, dtype=float)
        return _stack(
            -np.sin(t) * np.exp(-1.0 + np.cos(t)),
            2.0 * np.cos(t) * np.exp(-1.0 + np.sin(t)),
        )
