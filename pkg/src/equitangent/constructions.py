"""Explicit equitangent constructions built from circular arcs.

* :func:`build_figure1` -- a four-arc C1 curve that is equitangent along the
  radical axis of two circles but is not a circle.
* :func:`build_rounded_reuleaux` / :func:`build_radical_polygon` -- a rounded
  Reuleaux polygon of constant width and the regular 2n-gon along whose
  boundary it is equitangent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves2d import ArcSplineCurve
from .errors import (ArcsDoNotClose, EvenN, NegativeEpsilon, NonPositiveLambda,
                     NotOnRadicalAxis, PointInsideHull)
from .geom2d import (EPS_GEOM, TWO_PI, Arc2, Circle2, Line2, Point2, line_intersection,
                     power_of_point, project_onto_line, radical_axis, unit_vector)

# Circles and axis points read off the drawing commands of the original figure.
FIGURE1_C1 = Circle2(Point2(2.41, 5.65), 0.96)
FIGURE1_C2 = Circle2(Point2(2.41, 2.19), 1.72)
FIGURE1_X = Point2(0.32, 4.22)
FIGURE1_Y = Point2(5.98, 4.22)
# The drawn axis is rounded to two decimals; it sits about 6e-3 off the true
# radical axis of the drawn circles.
FIGURE1_SNAP = 0.01


@dataclass(frozen=True)
class Figure1:
    """Result of :func:`build_figure1` together with its defining points."""

    curve: ArcSplineCurve
    axis: Line2
    x: Point2
    y: Point2
    a: Point2
    b: Point2
    c: Point2
    d: Point2


def _hull_tangencies(x: Point2, circles: tuple[Circle2, Circle2]):
    """Tangent lines from ``x`` that support the union of both circles.

    Returns a list of ``(circle index, normal angle, tangency point)``.
    """
    out = []
    for i, circ in enumerate(circles):
        other = circles[1 - i]
        v = x - circ.center
        d = v.norm()
        if d <= circ.radius + EPS_GEOM:
            raise PointInsideHull("point lies inside one of the circles")
        phi = v.angle()
        alpha = math.acos(circ.radius / d)
        for t in (phi + alpha, phi - alpha):
            u = unit_vector(t)
            # Support line u . p = u . x must leave the other disk on its inner side.
            if (other.center - x).dot(u) + other.radius <= EPS_GEOM:
                out.append((i, t % TWO_PI, circ.point_at(t)))
    return out


def _ccw_delta(t0: float, t1: float) -> float:
    return (t1 - t0) % TWO_PI


def build_figure1(c1: Circle2, c2: Circle2, x: Point2, y: Point2,
                  snap_tol: float = EPS_GEOM) -> Figure1:
    """Four-arc curve equitangent along the radical axis of ``c1`` and ``c2``.

    ``x`` and ``y`` must lie on the radical axis (points within ``snap_tol``
    are projected onto it) and outside the convex hull of the two circles.
    From ``x`` the hull tangents touch ``c1`` at ``a`` and ``c2`` at ``b``;
    from ``y`` they touch at ``c`` and ``d``.  The curve consists of the arc
    of ``c1`` between ``c`` and ``a``, the arc of ``c2`` between ``b`` and
    ``d``, and two bridging arcs tangent to ``xa, xb`` and ``yc, yd``.
    """
    axis = radical_axis(c1, c2)
    pts = []
    for name, p in (("x", x), ("y", y)):
        off = axis.distance(p)
        if off > snap_tol:
            raise NotOnRadicalAxis(f"{name} is {off:.3g} away from the radical axis")
        pts.append(project_onto_line(p, axis))
    x, y = pts
    if x.distance(y) <= EPS_GEOM:
        raise ArcsDoNotClose("x and y coincide")

    tang = {}
    for label, p in (("x", x), ("y", y)):
        found = _hull_tangencies(p, (c1, c2))
        if not found:
            raise PointInsideHull(f"{label} is inside the convex hull of the circles")
        if sorted(f[0] for f in found) != [0, 1]:
            raise ArcsDoNotClose(f"hull tangents from {label} do not touch both circles")
        tang[label] = {f[0]: (f[1], f[2]) for f in found}

    # Both cyclic normal orders (x1, x2, y2, y1) and (x2, x1, y1, y2) close up.
    ta, tb = tang["x"][0][0], tang["x"][1][0]
    tc, td = tang["y"][0][0], tang["y"][1][0]
    if _ccw_delta(ta, tb) < _ccw_delta(tb, ta):
        seq = [("x", 0), ("x", 1), ("y", 1), ("y", 0)]
    else:
        seq = [("x", 1), ("x", 0), ("y", 0), ("y", 1)]
    angles = [tang[s][i][0] for s, i in seq]
    sweeps = [_ccw_delta(angles[k], angles[(k + 1) % 4]) for k in range(4)]
    if abs(sum(sweeps) - TWO_PI) > 1e-9 or min(sweeps) <= 1e-12:
        raise ArcsDoNotClose("tangency points do not interleave around the curve")

    circles = (c1, c2)
    arcs = []
    for k in range(4):
        (s0, i0), (s1, i1) = seq[k], seq[(k + 1) % 4]
        t0, p0 = tang[s0][i0]
        t1, p1 = tang[s1][i1]
        end = t0 + sweeps[k]
        if s0 == s1:
            arcs.append(Arc2(_bridging_circle(p0, t0, p1, t1), t0, end))
        elif i0 == i1:
            arcs.append(Arc2(circles[i0], t0, end))
        else:
            raise ArcsDoNotClose("inconsistent arc order")
    curve = ArcSplineCurve(arcs)
    (_, a), (_, b) = tang["x"][0], tang["x"][1]
    (_, c), (_, d) = tang["y"][0], tang["y"][1]
    return Figure1(curve, axis, x, y, a, b, c, d)


def _bridging_circle(p0: Point2, t0: float, p1: Point2, t1: float) -> Circle2:
    """Circle tangent to the support lines at ``p0`` and ``p1`` with the given normals."""
    n0, n1 = unit_vector(t0), unit_vector(t1)
    center = line_intersection(Line2(p0, n0), Line2(p1, n1))
    r0 = (p0 - center).dot(n0)
    r1 = (p1 - center).dot(n1)
    if r0 <= 0.0 or r1 <= 0.0:
        raise ArcsDoNotClose("bridging arc would be concave")
    if abs(r0 - r1) > 1e-9 * max(1.0, r0):
        raise NotOnRadicalAxis(f"bridging radii differ by {abs(r0 - r1):.3g}")
    return Circle2(center, 0.5 * (r0 + r1))


def build_figure1_default() -> Figure1:
    """The construction with the circles and axis points of the original drawing."""
    return build_figure1(FIGURE1_C1, FIGURE1_C2, FIGURE1_X, FIGURE1_Y, snap_tol=FIGURE1_SNAP)


# -- constant width pairs -------------------------------------------------------

def _check_params(n: int, lam: float, eps: float) -> None:
    if n < 3 or n % 2 == 0:
        raise EvenN(f"n must be odd and at least 3, got {n}")
    if not lam > 0.0:
        raise NonPositiveLambda(f"lambda must be positive, got {lam}")
    if eps < 0.0:
        raise NegativeEpsilon(f"epsilon must be nonnegative, got {eps}")


def polygon_vertices(n: int, lam: float) -> list[Point2]:
    """Regular n-gon, counterclockwise from the top, with longest diagonal ``lam``."""
    m = n // 2
    R = lam / (2.0 * math.sin(m * math.pi / n))
    return [Point2.polar(R, math.pi / 2 + TWO_PI * k / n) for k in range(n)]


def build_rounded_reuleaux(n: int, lam: float, eps: float) -> tuple[ArcSplineCurve, list[Point2]]:
    """Rounded Reuleaux polygon of constant width ``lam + 2 eps``.

    Arcs of radius ``eps`` around each vertex alternate with arcs of radius
    ``lam + eps`` around the opposite vertex.  With ``eps = 0`` the small
    arcs are corners of zero radius.
    """
    _check_params(n, lam, eps)
    verts = polygon_vertices(n, lam)
    half = math.pi / (2 * n)
    arcs = []
    for j in range(2 * n):
        psi = math.pi / 2 + j * math.pi / n
        if j % 2 == 0:
            center, r = verts[j // 2], eps
        else:
            center, r = verts[((j - n) // 2) % n], lam + eps
        arcs.append(Arc2(Circle2(center, r), psi - half, psi + half))
    return ArcSplineCurve(arcs), verts


def radical_polygon_edges(n: int, lam: float, eps: float) -> list[tuple[Circle2, Circle2]]:
    """For each edge of the radical polygon, its (small, large) defining circles.

    Edge ``i`` joins vertex ``i`` and vertex ``i + 1`` of
    :func:`build_radical_polygon`.
    """
    _check_params(n, lam, eps)
    verts = polygon_vertices(n, lam)
    lines = []
    for k in range(n):
        for small, big in ((k, (k + 1) % n), ((k + 1) % n, k)):
            cs, cb = Circle2(verts[small], eps), Circle2(verts[big], lam + eps)
            axis = radical_axis(cs, cb)
            foot = project_onto_line(Point2(0.0, 0.0), axis)
            lines.append((foot.angle() % TWO_PI, cs, cb, axis))
    lines.sort(key=lambda e: e[0])
    return [(cs, cb) for _, cs, cb, _ in lines]


def build_radical_polygon(n: int, lam: float, eps: float) -> list[Point2]:
    """Regular 2n-gon whose edges lie on radical axes of adjacent vertex circles.

    Each side ``V_k V_(k+1)`` of the n-gon contributes two lines: the radical
    axis of the circle of radius ``eps`` at one end and the circle of radius
    ``lam + eps`` at the other.  Vertices are returned counterclockwise;
    edge ``i`` runs from vertex ``i`` to vertex ``i + 1``.
    """
    edges = radical_polygon_edges(n, lam, eps)
    axes = [radical_axis(cs, cb) for cs, cb in edges]
    m = len(axes)
    # Edge i lies on axes[i] and starts where axes[i - 1] meets it.
    return [line_intersection(axes[i - 1], axes[i]) for i in range(m)]


def edge_power_residual(vertices: list[Point2], edges: list[tuple[Circle2, Circle2]],
                        samples: int = 20) -> float:
    """Largest power difference of the defining circle pair along each edge."""
    worst = 0.0
    m = len(vertices)
    for i in range(m):
        p, q = vertices[i], vertices[(i + 1) % m]
        cs, cb = edges[i]
        for k in range(samples):
            z = p + (q - p) * (k / (samples - 1))
            worst = max(worst, abs(power_of_point(z, cs) - power_of_point(z, cb)))
    return worst
