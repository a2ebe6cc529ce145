"""Named analytic densities used to manufacture boundary data."""

from typing import Callable, Dict

import numpy as np
from numpy.typing import ArrayLike, NDArray

from modsymm.core.exceptions import ConfigurationError

Density = Callable[[ArrayLike], NDArray[np.float64]]

# Accepted in configurations, refused when a run needs the actual function
UNKNOWN_DENSITY = "paper-unknown"


def _constant(value: float) -> Density:
    return lambda t: np.full(np.shape(t), value, dtype=float)


DENSITIES: Dict[str, Density] = {
    "exp-sin": lambda t: np.exp(np.sin(t)),
    "exp-cos": lambda t: np.exp(np.cos(t)),
    "sin": lambda t: np.sin(np.asarray(t, dtype=float)),
    "constant": _constant(1.0),
    "zero": _constant(0.0),
}


def density_names() -> list[str]:
    return [*DENSITIES, UNKNOWN_DENSITY]


def get_density(name: str) -> Density:
    if name == UNKNOWN_DENSITY:
        raise ConfigurationError(
            f"'{UNKNOWN_DENSITY}' names a density that is not known in closed form "
            "and cannot generate data. Use one of: "
            f"{', '.join(DENSITIES)}."
        )
    density = DENSITIES.get(name)
    if density is None:
        raise ConfigurationError(
            f"Unknown density '{name}'. Available: {', '.join(density_names())}."
        )
    return density
