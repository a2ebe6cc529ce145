from typing import Callable, Dict, Sequence

from modsymm.core.exceptions import ConfigurationError
from modsymm.core.logging import logger
from modsymm.geometry.base import BoundaryCurve
from modsymm.geometry.builtin import Circle, Ellipse, ExpBlob

CurveFactory = Callable[..., BoundaryCurve]


class CurveRegistry:
    """
    Registry of named curve factories.

    Factories take the curve parameters positionally, so a configuration
    entry like ``ellipse`` with params ``[1, 2]`` becomes ``Ellipse(1, 2)``.
    Every curve built through the registry is checked for regularity.
    """

    def __init__(self):
        self._factories: Dict[str, CurveFactory] = {}

    def register_curve(self, name: str, factory: CurveFactory):
        """
        Register a new curve factory.

        :param name: Unique identifier used in configurations.
        :param factory: Callable returning a BoundaryCurve.
        """
        if not callable(factory):
            raise TypeError(f"The factory for curve '{name}' is not callable.")
        if name in self._factories:
            raise ValueError(f"Curve '{name}' already exists.")
        self._factories[name] = factory
        logger.debug(f"Curve '{name}' has been registered.")

    def list_curves(self) -> list[str]:
        """Return the names of all registered curves."""
        return list(self._factories.keys())

    def make(self, name: str, params: Sequence[float] = ()) -> BoundaryCurve:
        """
        Build the named curve with the given parameters.

        Raises ConfigurationError for unknown names or unusable parameters.
        """
        factory = self._factories.get(name)
        if factory is None:
            raise ConfigurationError(
                f"Unknown curve '{name}'. Available: {', '.join(self.list_curves())}."
            )
        try:
            curve = factory(*[float(p) for p in params])
        except TypeError as e:
            raise ConfigurationError(
                f"Curve '{name}' does not accept parameters {list(params)}: {e}"
            ) from e
        curve.validate()
        return curve


def create_default_registry() -> CurveRegistry:
    registry = CurveRegistry()
    for curve_cls in (Circle, Ellipse, ExpBlob):
        registry.register_curve(curve_cls.name, curve_cls)
    return registry


curve_registry = create_default_registry()


def make_builtin(name: str, params: Sequence[float] = ()) -> BoundaryCurve:
    """Build one of the registered curves: circle(a), ellipse(a, b), expblob."""
    return curve_registry.make(name, params)
