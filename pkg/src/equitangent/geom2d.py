"""Planar primitives: points, lines, circles, arcs and the power of a point."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConcentricCircles, GeometryError, PointNotExterior

# Absolute length tolerance for on/inside/outside predicates on unit-scale input.
EPS_GEOM = 1e-9

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Point2:
    """A point (or free vector) in the plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite coordinates ({self.x}, {self.y})")

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> Point2:
        return Point2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self) -> Point2:
        return Point2(-self.x, -self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    def dot(self, other: Point2) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point2) -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def unit(self) -> Point2:
        n = self.norm()
        if n == 0.0:
            raise GeometryError("cannot normalize the zero vector")
        return Point2(self.x / n, self.y / n)

    def perp(self) -> Point2:
        """Counterclockwise rotation by a right angle."""
        return Point2(-self.y, self.x)

    def angle(self) -> float:
        return math.atan2(self.y, self.x)

    def distance(self, other: Point2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    @classmethod
    def polar(cls, r: float, theta: float) -> Point2:
        return cls(r * math.cos(theta), r * math.sin(theta))


def unit_vector(theta: float) -> Point2:
    return Point2(math.cos(theta), math.sin(theta))


@dataclass(frozen=True)
class Line2:
    """A line stored as a point on it and a unit direction.

    The direction is normalized at construction, so any nonzero vector may
    be passed in.
    """

    point: Point2
    direction: Point2

    def __post_init__(self):
        object.__setattr__(self, "direction", self.direction.unit())

    @classmethod
    def through(cls, p: Point2, q: Point2) -> Line2:
        return cls(p, q - p)

    @property
    def normal(self) -> Point2:
        return self.direction.perp()

    def at(self, t: float) -> Point2:
        return self.point + self.direction * t

    def signed_distance(self, p: Point2) -> float:
        """Positive on the left of the direction of travel."""
        return self.direction.cross(p - self.point)

    def distance(self, p: Point2) -> float:
        return abs(self.signed_distance(p))

    def parameter_of(self, p: Point2) -> float:
        return (p - self.point).dot(self.direction)

    def contains(self, p: Point2, tol: float = EPS_GEOM) -> bool:
        return self.distance(p) <= tol


@dataclass(frozen=True)
class Circle2:
    """Circle with a nonnegative radius.

    A zero radius is allowed: it stands for a point circle, which the
    constant-width constructions need for their corners when the rounding
    offset is zero.
    """

    center: Point2
    radius: float

    def __post_init__(self):
        if not (self.radius >= 0.0 and math.isfinite(self.radius)):
            raise GeometryError(f"radius must be finite and nonnegative, got {self.radius}")

    def point_at(self, theta: float) -> Point2:
        return Point2(self.center.x + self.radius * math.cos(theta),
                      self.center.y + self.radius * math.sin(theta))


@dataclass(frozen=True)
class Arc2:
    """Circular arc from ``start_angle`` to ``end_angle``.

    Angles are polar angles about the circle center.  For a counterclockwise
    arc the sweep is ``end_angle - start_angle`` when that lies in (0, 2pi],
    otherwise it is reduced modulo 2pi; storing unwrapped end angles keeps
    full circles unambiguous.
    """

    circle: Circle2
    start_angle: float
    end_angle: float
    ccw: bool = True

    def __post_init__(self):
        if self.sweep <= 0.0:
            raise GeometryError("arc sweep must be positive")

    @property
    def sweep(self) -> float:
        raw = self.end_angle - self.start_angle if self.ccw else self.start_angle - self.end_angle
        if 0.0 < raw <= TWO_PI * (1.0 + 1e-12):
            return raw
        raw = math.fmod(raw, TWO_PI)
        if raw <= 0.0:
            raw += TWO_PI
        return raw

    @property
    def length(self) -> float:
        return self.circle.radius * self.sweep

    @property
    def start_point(self) -> Point2:
        return self.circle.point_at(self.start_angle)

    @property
    def end_point(self) -> Point2:
        return self.circle.point_at(self.end_angle)

    def angle_at(self, fraction: float) -> float:
        s = self.sweep * fraction
        return self.start_angle + s if self.ccw else self.start_angle - s

    def point_at(self, fraction: float) -> Point2:
        return self.circle.point_at(self.angle_at(fraction))

    def tangent_at_angle(self, theta: float) -> Point2:
        """Unit tangent in the direction of travel."""
        t = Point2(-math.sin(theta), math.cos(theta))
        return t if self.ccw else -t

    def contains_angle(self, theta: float, tol: float = 1e-12) -> bool:
        if self.ccw:
            offset = (theta - self.start_angle) % TWO_PI
        else:
            offset = (self.start_angle - theta) % TWO_PI
        return offset <= self.sweep + tol or offset >= TWO_PI - tol

    def reversed(self) -> Arc2:
        return Arc2(self.circle, self.end_angle, self.start_angle, not self.ccw)


def power_of_point(p: Point2, circle: Circle2) -> float:
    dx = p.x - circle.center.x
    dy = p.y - circle.center.y
    return dx * dx + dy * dy - circle.radius * circle.radius


def radical_axis(c1: Circle2, c2: Circle2) -> Line2:
    """Line of points with equal power with respect to both circles."""
    d = c2.center - c1.center
    dist = d.norm()
    if dist <= 1e-12:
        raise ConcentricCircles("radical axis is undefined for concentric circles")
    u = d * (1.0 / dist)
    # Signed position along the center line, measured from c1's center.
    s = (dist * dist + c1.radius ** 2 - c2.radius ** 2) / (2.0 * dist)
    return Line2(c1.center + u * s, u.perp())


def tangent_points_to_circle(x: Point2, circle: Circle2,
                             tol: float = EPS_GEOM) -> tuple[Point2, Point2]:
    """Tangency points of the two tangent lines from ``x`` to ``circle``.

    The first returned point is reached by turning clockwise from the
    direction towards the center, the second counterclockwise.
    """
    if power_of_point(x, circle) <= tol:
        raise PointNotExterior("point is on or inside the circle")
    v = x - circle.center
    d = v.norm()
    phi = v.angle()
    alpha = math.acos(circle.radius / d)
    return circle.point_at(phi + alpha), circle.point_at(phi - alpha)


def project_onto_line(p: Point2, line: Line2) -> Point2:
    return line.at(line.parameter_of(p))


def angle_between(l1: Line2, l2: Line2) -> float:
    """Unsigned acute angle between two lines, in [0, pi/2]."""
    c = abs(l1.direction.dot(l2.direction))
    s = abs(l1.direction.cross(l2.direction))
    return math.atan2(s, c)


def reflect_across_line(p: Point2, line: Line2) -> Point2:
    foot = project_onto_line(p, line)
    return foot * 2.0 - p


def line_intersection(l1: Line2, l2: Line2) -> Point2:
    denom = l1.direction.cross(l2.direction)
    if abs(denom) < 1e-15:
        raise GeometryError("lines are parallel")
    t = (l2.point - l1.point).cross(l2.direction) / denom
    return l1.at(t)
