"""Schroedinger equations with a delta potential in complex and quaternionic form."""

from .algebra import NATURAL, PhysicalConstants, Quaternion, quat_mul, quat_sandwich
from .errors import DeltaError

__all__ = ["NATURAL", "PhysicalConstants", "Quaternion", "quat_mul", "quat_sandwich", "DeltaError"]
__version__ = "0.1.0"
