"""Upper half-plane model tools for equitangency from the boundary line.

Geodesics of the model are half-circles centered on the x-axis (and
vertical rays).  A circle centered at ``(x, 0)`` that meets a curve at right
angles at two points is therefore a geodesic chord that is a double normal,
and its radius is the common tangent length from ``(x, 0)``.
"""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from scipy.integrate import quad

from .curves2d import ArcSplineCurve, Curve
from .errors import EndpointMismatch, GeometryError, NotEquitangentAtSample, NotInUpperHalfPlane
from .geom2d import EPS_GEOM, TWO_PI, Arc2, Circle2, Point2


@dataclass(frozen=True)
class HalfPlanePoint:
    x: float
    y: float

    def __post_init__(self):
        if not self.y > 0.0:
            raise NotInUpperHalfPlane(f"y must be positive, got {self.y}")

    @classmethod
    def from_point(cls, p: Point2) -> HalfPlanePoint:
        return cls(p.x, p.y)

    def as_point(self) -> Point2:
        return Point2(self.x, self.y)

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


def _as_hp(p) -> HalfPlanePoint:
    return p if isinstance(p, HalfPlanePoint) else HalfPlanePoint(p.x, p.y)


@dataclass(frozen=True)
class GeodesicChord:
    """Segment of a geodesic between two points.

    ``carrier`` is the supporting half-circle; it is ``None`` for a vertical
    geodesic, in which case ``vertical_x`` gives its abscissa.
    """

    carrier: Circle2 | None
    p: HalfPlanePoint
    q: HalfPlanePoint
    vertical_x: float | None = None

    def __post_init__(self):
        if self.carrier is None:
            if self.vertical_x is None:
                raise GeometryError("vertical chord needs vertical_x")
            off = max(abs(self.p.x - self.vertical_x), abs(self.q.x - self.vertical_x))
        else:
            if abs(self.carrier.center.y) > 1e-12:
                raise GeometryError("geodesic carrier must be centered on the x-axis")
            # Relative to the radius: nearly vertical geodesics have huge carriers.
            off = max(abs(self.carrier.center.distance(e.as_point()) - self.carrier.radius)
                      for e in (self.p, self.q)) / max(1.0, self.carrier.radius)
        if off > EPS_GEOM:
            raise GeometryError(f"chord endpoints are {off:.3g} off the carrier")

    @classmethod
    def through(cls, p, q) -> GeodesicChord:
        p, q = _as_hp(p), _as_hp(q)
        if abs(p.x - q.x) <= 1e-14 * max(1.0, abs(p.x)):
            return cls(None, p, q, vertical_x=p.x)
        c = ((q.x ** 2 + q.y ** 2) - (p.x ** 2 + p.y ** 2)) / (2.0 * (q.x - p.x))
        return cls(Circle2(Point2(c, 0.0), math.hypot(p.x - c, p.y)), p, q)

    def tangent_at(self, pt: HalfPlanePoint) -> Point2:
        if self.carrier is None:
            return Point2(0.0, 1.0)
        return (pt.as_point() - self.carrier.center).unit().perp()


def hyp_distance(p, q) -> float:
    """Hyperbolic distance in the upper half-plane model."""
    p, q = _as_hp(p), _as_hp(q)
    chord = math.hypot(p.x - q.x, p.y - q.y)
    # Equivalent to acosh(1 + |p-q|^2 / (2 p_y q_y)) but accurate for close points.
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(p.y * q.y)))


def geodesic_arclength(p, q) -> float:
    """Hyperbolic length of the geodesic from ``p`` to ``q`` by quadrature of ds = |dz| / y."""
    chord = GeodesicChord.through(p, q)
    if chord.carrier is None:
        lo, hi = sorted((chord.p.y, chord.q.y))
        return quad(lambda y: 1.0 / y, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    c = chord.carrier.center.x

    def integral(lo, hi):
        # On the carrier, |dz| = rho dt and y = rho sin t.
        return quad(lambda t: 1.0 / math.sin(t), lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)[0]

    # Angles are measured from the nearer end of the carrier so that points
    # close to the boundary keep full relative precision.
    ua = math.atan2(chord.p.y, abs(chord.p.x - c))
    ub = math.atan2(chord.q.y, abs(chord.q.x - c))
    if (chord.p.x >= c) == (chord.q.x >= c):
        return integral(*sorted((ua, ub)))
    return integral(ua, 0.5 * math.pi) + integral(ub, 0.5 * math.pi)


# -- isometries -----------------------------------------------------------------

def _to_disk(z: complex) -> complex:
    return (z - 1j) / (z + 1j)


def _from_disk(w: complex) -> complex:
    return 1j * (1 + w) / (1 - w)


def point_along_geodesic(p, q, s: float) -> HalfPlanePoint:
    """Point at hyperbolic distance ``s`` from ``p`` on the geodesic ray through ``q``."""
    p, q = _as_hp(p), _as_hp(q)
    w = _to_disk((q.as_complex() - p.x) / p.y)
    rot = w / abs(w)
    z = _from_disk(rot * math.tanh(s / 2.0))
    return HalfPlanePoint(p.x + p.y * z.real, p.y * z.imag)


def point_from_center(center, angle: float, s: float) -> HalfPlanePoint:
    """Point at distance ``s`` from ``center`` leaving in disk-model direction ``angle``."""
    center = _as_hp(center)
    z = _from_disk(cmath.rect(math.tanh(s / 2.0), angle))
    return HalfPlanePoint(center.x + center.y * z.real, center.y * z.imag)


def hyperbolic_circle(center, radius: float) -> Circle2:
    """Euclidean circle that is the hyperbolic circle of the given center and radius."""
    c = _as_hp(center)
    return Circle2(Point2(c.x, c.y * math.cosh(radius)), c.y * math.sinh(radius))


# -- curves of constant hyperbolic width -----------------------------------------

def hyperbolic_disk(center, radius: float) -> ArcSplineCurve:
    circ = hyperbolic_circle(center, radius)
    return ArcSplineCurve([Arc2(circ, 0.0, TWO_PI)])


def build_hyperbolic_reuleaux(n: int, lam: float, eps: float,
                              center=HalfPlanePoint(0.0, 1.0)) -> tuple[ArcSplineCurve, list[HalfPlanePoint]]:
    """Rounded Reuleaux polygon in the hyperbolic plane, of hyperbolic width ``lam + 2 eps``.

    The vertices form a regular n-gon (n odd) whose longest diagonals have
    hyperbolic length ``lam``.  Around each vertex there is an arc of the
    hyperbolic circle of radius ``eps`` and, on the far side, an arc of
    radius ``lam + eps``; consecutive arcs meet on a common geodesic through
    both centers, which makes the joints C1.
    """
    if n < 3 or n % 2 == 0:
        raise GeometryError("n must be odd and at least 3")
    if not (lam > 0.0 and eps > 0.0):
        raise GeometryError("lam and eps must be positive")
    m = n // 2
    sinh_r = math.sqrt((math.cosh(lam) - 1.0) / (1.0 - math.cos(TWO_PI * m / n)))
    circumradius = math.asinh(sinh_r)
    verts = [point_from_center(center, math.pi / 2 + TWO_PI * k / n, circumradius) for k in range(n)]

    def joint(a, b):
        return point_along_geodesic(verts[a % n], verts[b % n], lam + eps).as_point()

    def arc(vertex, radius, start, end):
        circ = hyperbolic_circle(verts[vertex % n], radius)
        a0 = (start - circ.center).angle()
        a1 = a0 + (((end - circ.center).angle() - a0) % TWO_PI)
        return Arc2(circ, a0, a1)

    arcs = []
    for k in range(n):
        j = k + m + 1
        arcs.append(arc(k, eps, joint(k + m, k), joint(j, k)))
        arcs.append(arc(j, lam + eps, joint(j, k), joint(j, k + 1)))
    return ArcSplineCurve(arcs, position_tol=1e-9, tangent_tol=1e-8), verts


# -- checks -----------------------------------------------------------------------

def orthogonality_residual(chord: GeodesicChord, curve: Curve,
                           param_p: float, param_q: float) -> tuple[float, float]:
    """|cos| of the angle between the chord and the curve at both endpoints."""
    out = []
    for end, param in ((chord.p, param_p), (chord.q, param_q)):
        on_curve = curve.point_at(param)
        gap = on_curve.distance(end.as_point())
        if gap > EPS_GEOM:
            raise EndpointMismatch(f"chord endpoint is {gap:.3g} away from the curve point")
        out.append(abs(chord.tangent_at(end).dot(curve.tangent_at(param))))
    return out[0], out[1]


class WidthSample(NamedTuple):
    x: float
    L1: float
    L2: float
    width: float


def _boundary_tangents(curve: Curve, x: float):
    return curve.tangents_from(Point2(float(x), 0.0))


def equitangent_from_boundary_residual(curve: Curve, x_samples: Sequence[float]) -> float:
    """Largest |L1 - L2| over tangent pairs drawn from points ``(x, 0)``."""
    worst = 0.0
    for x in x_samples:
        t1, t2 = _boundary_tangents(curve, x)
        worst = max(worst, abs(t1.length - t2.length))
    return worst


def hyperbolic_width_profile(curve: Curve, x_samples: Sequence[float],
                             tol: float = 1e-6) -> list[WidthSample]:
    """Hyperbolic length of the tangency chord seen from each ``(x, 0)``."""
    rows = []
    for x in x_samples:
        t1, t2 = _boundary_tangents(curve, x)
        if abs(t1.length - t2.length) > tol:
            raise NotEquitangentAtSample(
                f"tangent lengths from ({x}, 0) differ by {abs(t1.length - t2.length):.3g}")
        rows.append(WidthSample(float(x), t1.length, t2.length, hyp_distance(t1.point, t2.point)))
    return rows


def width_profile_csv(rows: Sequence[WidthSample]) -> str:
    buf = io.StringIO()
    buf.write("x,L1,L2,width\n")
    for r in rows:
        buf.write(",".join(format(v, ".17g") for v in r) + "\n")
    return buf.getvalue()
