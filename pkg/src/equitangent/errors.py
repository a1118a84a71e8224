"""Exception hierarchy shared by every module.

The CLI reports the class name of any :class:`GeometryError` on stderr and
exits with status 2, so class names double as stable error codes.
"""


class GeometryError(ValueError):
    """A precondition of a geometric operation does not hold."""


class ConcentricCircles(GeometryError):
    pass


class PointNotExterior(GeometryError):
    def __init__(self, message="point is not exterior", index=None):
        super().__init__(message if index is None else f"{message} (locus index {index})")
        self.index = index


class TangencyNotFound(GeometryError):
    pass


class InvalidCurve(GeometryError):
    pass


class NotOnRadicalAxis(GeometryError):
    pass


class PointInsideHull(GeometryError):
    pass


class ArcsDoNotClose(GeometryError):
    pass


class EvenN(GeometryError):
    pass


class NonPositiveLambda(GeometryError):
    pass


class NegativeEpsilon(GeometryError):
    pass


class NotInUpperHalfPlane(GeometryError):
    pass


class EndpointMismatch(GeometryError):
    pass


class NotEquitangentAtSample(GeometryError):
    pass


class XAtTangency(GeometryError):
    pass


class PointNotOnLine(GeometryError):
    pass


class NotOnSurface(GeometryError):
    pass


class ContinuationFailed(GeometryError):
    pass


class NotEquitangentSource(GeometryError):
    pass


class NotConvex(GeometryError):
    pass
