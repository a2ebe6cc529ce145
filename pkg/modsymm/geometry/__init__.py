from modsymm.geometry.base import BoundaryCurve, ShiftedCurve
from modsymm.geometry.builtin import Circle, Ellipse, ExpBlob
from modsymm.geometry.registry import CurveRegistry, curve_registry, make_builtin

__all__ = [
    "BoundaryCurve",
    "ShiftedCurve",
    "Circle",
    "Ellipse",
    "ExpBlob",
    "CurveRegistry",
    "curve_registry",
    "make_builtin",
]
