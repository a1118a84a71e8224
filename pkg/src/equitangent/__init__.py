"""Equal tangent segments to convex curves and surfaces: constructions and checkers."""

from .errors import GeometryError

__all__ = ["GeometryError"]
__version__ = "0.1.0"
