import math

import numpy as np
import pytest

from equitangent.curves2d import ArcSplineCurve, SupportCurve
from equitangent.errors import EndpointMismatch, NotEquitangentAtSample, NotInUpperHalfPlane
from equitangent.geom2d import Arc2, Circle2, Point2
from equitangent.hyperbolic import (GeodesicChord, HalfPlanePoint, build_hyperbolic_reuleaux,
                                    equitangent_from_boundary_residual, geodesic_arclength,
                                    hyp_distance, hyperbolic_circle, hyperbolic_disk,
                                    hyperbolic_width_profile, orthogonality_residual,
                                    point_along_geodesic, width_profile_csv)

XS = np.linspace(-10.0, 10.0, 100)


def euclid_circle(cx, cy, r):
    return ArcSplineCurve([Arc2(Circle2(Point2(cx, cy), r), 0.0, 2 * math.pi)])


def test_distance_vertical():
    assert hyp_distance(HalfPlanePoint(0, 1), HalfPlanePoint(0, math.e)) == pytest.approx(1.0, abs=1e-15)


def test_distance_to_self():
    p = HalfPlanePoint(0.3, 0.7)
    assert hyp_distance(p, p) == 0.0


def test_distance_horizontal_pair():
    p, q = HalfPlanePoint(-1, 1), HalfPlanePoint(1, 1)
    assert hyp_distance(p, q) == pytest.approx(math.acosh(3.0), abs=1e-14)
    assert geodesic_arclength(p, q) == pytest.approx(math.acosh(3.0), abs=1e-12)


def test_lower_half_plane_rejected():
    with pytest.raises(NotInUpperHalfPlane):
        HalfPlanePoint(0.0, 0.0)


def test_point_along_geodesic_distance():
    p, q = HalfPlanePoint(-0.5, 0.4), HalfPlanePoint(1.2, 2.0)
    r = point_along_geodesic(p, q, 0.8)
    assert hyp_distance(p, r) == pytest.approx(0.8, abs=1e-13)
    # r lies on the geodesic through p and q
    chord = GeodesicChord.through(p, q)
    assert abs(chord.carrier.center.distance(r.as_point()) - chord.carrier.radius) < 1e-12


def test_hyperbolic_circle_model():
    c, rho = HalfPlanePoint(0.4, 1.3), 0.9
    circ = hyperbolic_circle(c, rho)
    for t in np.linspace(0.0, 2 * math.pi, 13):
        p = HalfPlanePoint.from_point(circ.point_at(float(t)))
        assert hyp_distance(c, p) == pytest.approx(rho, abs=1e-13)


def _circle_param(center, p):
    return (p - center).angle() % (2 * math.pi)


def test_orthogonal_chord():
    curve = euclid_circle(0.0, 2.0, 1.0)
    y = 1.5
    p, q = HalfPlanePoint(-math.sqrt(3 - y * y), y), HalfPlanePoint(math.sqrt(3 - y * y), y)
    chord = GeodesicChord(Circle2(Point2(0, 0), math.sqrt(3)), p, q)
    c = Point2(0.0, 2.0)
    r1, r2 = orthogonality_residual(chord, curve, _circle_param(c, p.as_point()), _circle_param(c, q.as_point()))
    assert r1 < 1e-10 and r2 < 1e-10


def test_non_orthogonal_chord():
    curve = euclid_circle(0.0, 2.0, 1.0)
    y = 1.3125
    x = math.sqrt(2.25 - y * y)
    p, q = HalfPlanePoint(-x, y), HalfPlanePoint(x, y)
    chord = GeodesicChord(Circle2(Point2(0, 0), 1.5), p, q)
    c = Point2(0.0, 2.0)
    r1, r2 = orthogonality_residual(chord, curve, _circle_param(c, p.as_point()), _circle_param(c, q.as_point()))
    assert r1 > 0.1 and r2 > 0.1


def test_vertical_diameter_chord():
    curve = euclid_circle(0.0, 2.0, 1.0)
    chord = GeodesicChord(None, HalfPlanePoint(0, 1), HalfPlanePoint(0, 3), vertical_x=0.0)
    r1, r2 = orthogonality_residual(chord, curve, 1.5 * math.pi, 0.5 * math.pi)
    assert r1 < 1e-15 and r2 < 1e-15


def test_endpoint_mismatch():
    curve = euclid_circle(0.0, 2.0, 1.0)
    chord = GeodesicChord(None, HalfPlanePoint(0, 1), HalfPlanePoint(0, 3), vertical_x=0.0)
    with pytest.raises(EndpointMismatch):
        orthogonality_residual(chord, curve, 0.0, 0.5 * math.pi)


def test_circle_equitangent_from_boundary():
    assert equitangent_from_boundary_residual(euclid_circle(0.0, 2.0, 1.0), XS) < 1e-9


def test_ellipse_not_equitangent_from_boundary():
    ellipse = SupportCurve.ellipse(2.0, 1.0, Point2(0.0, 3.0))
    assert equitangent_from_boundary_residual(ellipse, XS) > 1e-3
    with pytest.raises(NotEquitangentAtSample):
        hyperbolic_width_profile(ellipse, XS)


@pytest.mark.parametrize("rho", [0.3, 0.7, 1.5])
def test_disk_width_is_diameter(rho):
    rows = hyperbolic_width_profile(hyperbolic_disk(HalfPlanePoint(0.2, 1.1), rho), XS)
    assert max(abs(r.width - 2 * rho) for r in rows) < 1e-8


@pytest.mark.parametrize("n", [3, 5])
def test_reuleaux_witness_has_constant_width(n):
    curve, verts = build_hyperbolic_reuleaux(n, 1.0, 0.2)
    assert equitangent_from_boundary_residual(curve, XS) < 1e-7
    widths = [r.width for r in hyperbolic_width_profile(curve, XS)]
    assert max(widths) - min(widths) < 1e-6
    assert np.mean(widths) == pytest.approx(1.4, abs=1e-6)
    diag = max(hyp_distance(p, q) for p in verts for q in verts)
    assert diag == pytest.approx(1.0, abs=1e-12)


def test_width_csv_format():
    rows = hyperbolic_width_profile(hyperbolic_disk(HalfPlanePoint(0.0, 1.0), 0.5), [0.0, 2.0])
    lines = width_profile_csv(rows).splitlines()
    assert lines[0] == "x,L1,L2,width"
    assert len(lines) == 3
    assert float(lines[1].split(",")[3]) == rows[0].width


@pytest.mark.parametrize("p,q", [((0.0, 0.5), (1e-7, 3.0)), ((0.0, 3.0), (-1.192092896e-07, 0.5))])
def test_nearly_vertical_geodesic_quadrature(p, q):
    p, q = HalfPlanePoint(*p), HalfPlanePoint(*q)
    assert abs(hyp_distance(p, q) - geodesic_arclength(p, q)) < 1e-12
