import math

import numpy as np
import pytest

from equitangent import ovaloid3d as o
from equitangent.errors import (GeometryError, NotConvex, NotEquitangentSource, NotOnSurface,
                                PointNotExterior)
from polar_oracle import hausdorff_to_conic

SPHERE = o.corpus_surface("sphere")
SPHEROID = o.corpus_surface("spheroid")
TRIAXIAL = o.corpus_surface("triaxial")
QUARTIC = o.corpus_surface("quartic")


def test_sphere_contact_circle():
    cc = o.contact_curve(SPHERE, [0.0, 0.0, 2.0])
    assert np.max(np.abs(cc.points[:, 2] - 0.5)) < 1e-12
    assert np.max(np.abs(np.hypot(cc.points[:, 0], cc.points[:, 1]) - math.sqrt(3) / 2)) < 1e-12


def test_spheroid_axis_contact_circle():
    cc = o.contact_curve(SPHEROID, [0.0, 0.0, 3.0])
    # Polar plane 3 z / 2.25 = 1.
    assert np.max(np.abs(cc.points[:, 2] - 0.75)) < 1e-12
    r = np.hypot(cc.points[:, 0], cc.points[:, 1])
    assert np.ptp(r) < 1e-12


def test_interior_source_rejected():
    with pytest.raises(PointNotExterior):
        o.contact_curve(TRIAXIAL, [0.1, 0.2, 0.3])


@pytest.mark.parametrize("surface", [SPHERE, SPHEROID, TRIAXIAL, QUARTIC], ids=lambda s: s.name)
def test_contact_curve_solves_system(surface):
    x = np.array([1.7, -2.1, 1.3])
    cc = o.contact_curve(surface, x)
    grad = surface.grad(cc.points)
    assert np.max(np.abs(surface.F(cc.points))) < 1e-11
    assert np.max(np.abs(np.sum(grad * (cc.points - x), axis=1))) < 1e-11
    assert np.max(np.abs(np.sum(grad * cc.tangents, axis=1))) < 1e-10
    assert len(cc.points) == o.DEFAULT_SAMPLES


@pytest.mark.parametrize("name", ["sphere", "spheroid", "triaxial"])
@pytest.mark.parametrize("x", [(0.0, 0.0, 3.0), (2.0, 0.5, -1.0), (-1.3, 2.7, 2.2), (4.0, 0.0, 0.0)])
def test_contact_curve_matches_polar_conic(name, x):
    surface = o.corpus_surface(name)
    cc = o.contact_curve(surface, x)
    assert hausdorff_to_conic(surface.axes, x, surface.interior_point, cc.points) < 1e-8


def test_sphere_spread_and_length():
    x = np.array([1.0, -2.0, 2.5])
    s = o.tangent_length_spread(SPHERE, x)
    assert s.spread < 1e-10
    assert s.min == pytest.approx(math.sqrt(x @ x - 1.0), abs=1e-12)


def test_spheroid_spreads():
    assert o.tangent_length_spread(SPHEROID, [0.0, 0.0, 3.0]).spread < 1e-9
    assert o.tangent_length_spread(SPHEROID, [2.0, 0.0, 2.0]).spread > 1e-2


def test_exterior_mask():
    pts = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.5], [0.0, 0.0, 2.0], [3.0, 3.0, 3.0]])
    assert o.exterior_mask(SPHEROID, pts).tolist() == [False, False, True, True]


def test_scan_is_independent_of_workers():
    grid = o.make_grid(5, 5, 5, -3.0, 3.0)
    one = o.sample_equitangent_locus(TRIAXIAL, grid, 1e-6, n=64)
    two = o.sample_equitangent_locus(TRIAXIAL, grid, 1e-6, n=64, workers=2)
    assert one.to_csv() == two.to_csv()
    assert np.array_equal(one.spreads, two.spreads, equal_nan=True)


def test_scan_reports_skips_and_csv():
    grid = o.make_grid(3, 3, 3, -2.0, 2.0)
    scan = o.sample_equitangent_locus(SPHERE, grid, 1e-8, n=64)
    assert scan.n_skipped == 1
    lines = scan.to_csv().splitlines()
    assert lines[0] == "x,y,z,spread"
    assert len(lines) == 27


def test_find_lines():
    t = np.linspace(-1, 1, 5)[:, None]
    line = np.array([0.0, 0.0, 1.0]) + t * np.array([1.0, 2.0, 0.5])
    pts = np.vstack([line, [[5.0, 5.0, 5.0], [-3.0, 2.0, 1.0]]])
    lines = o.find_lines(pts)
    assert len(lines) == 1 and len(lines[0]) == 5


def test_certify_no_plane_fails_for_sphere():
    scan = o.sample_equitangent_locus(SPHERE, o.make_grid(5, 5, 5, -3.0, 3.0), 1e-8, n=64)
    certified, witnesses = o.certify_no_plane(scan)
    assert not certified
    assert witnesses and all(w.spread < 1e-8 for w in witnesses)


def test_sphere_curvatures():
    s = o.sphere(2.0)
    c = o.principal_curvatures(s, [0.0, 1.2, 1.6])
    assert c.k1 == pytest.approx(0.5, abs=1e-14) and c.k2 == pytest.approx(0.5, abs=1e-14)


def test_spheroid_curvatures_match_meridian_ellipse():
    # Meridian x^2 + z^2 / 2.25 = 1 has curvature c / a^2 at the pole and a / c^2 at the equator.
    pole = o.principal_curvatures(SPHEROID, [0.0, 0.0, 1.5])
    assert pole.k1 == pytest.approx(1.5, abs=1e-13) and pole.k2 == pytest.approx(1.5, abs=1e-13)
    eq = o.principal_curvatures(SPHEROID, [1.0, 0.0, 0.0])
    assert eq.k1 == pytest.approx(1.0, abs=1e-13)
    assert eq.k2 == pytest.approx(1.0 / 2.25, abs=1e-13)
    assert abs(eq.e2 @ np.array([0.0, 0.0, 1.0])) == pytest.approx(1.0, abs=1e-13)


def test_curvature_off_surface():
    with pytest.raises(NotOnSurface):
        o.principal_curvatures(SPHEROID, [0.0, 0.0, 1.6])


def test_non_convex_rejected():
    with pytest.raises(NotConvex):
        o.Ellipsoid(1.0, -1.0, 1.0)
    with pytest.raises(GeometryError):
        o.corpus_surface("torus")


def test_sphere_umbilic_everywhere():
    rng = np.random.default_rng(7)
    pts = o.surface_points(SPHERE, rng.normal(size=(500, 3)))
    assert all(o.is_umbilic(SPHERE, p) for p in pts)


def test_triaxial_umbilic_pattern():
    m = o.Ellipsoid(1.5, 1.2, 1.0)
    for p in m.umbilics():
        assert o.is_umbilic(m, p)
    assert not o.is_umbilic(m, [0.0, 1.2, 0.0])
    assert not o.is_umbilic(m, [0.0, -1.2, 0.0])


def test_closed_form_umbilics_are_on_surface():
    m = o.Ellipsoid(1.5, 1.2, 1.0)
    pts = m.umbilics()
    assert np.max(np.abs(m.F(pts))) < 1e-15
    assert np.allclose(pts[:, 0] ** 2, 2.25 * (2.25 - 1.44) / 1.25)
    assert np.allclose(pts[:, 2] ** 2, (1.44 - 1.0) / 1.25)


def test_spheroid_umbilic_at_poles_only():
    assert o.is_umbilic(SPHEROID, [0.0, 0.0, 1.5], 1e-8)
    assert o.is_umbilic(SPHEROID, [0.0, 0.0, -1.5], 1e-8)
    assert not o.is_umbilic(SPHEROID, [1.0, 0.0, 0.0], 1e-8)


def test_umbilic_scan_sphere():
    assert o.umbilic_scan(SPHERE, n=500).all_umbilic


def test_joachimsthal():
    assert o.joachimsthal_check(SPHERE, [0.5, 2.0, 1.0]) == 0.0
    assert o.joachimsthal_check(SPHEROID, [0.0, 0.0, 3.0]) < 1e-6
    with pytest.raises(NotEquitangentSource):
        o.joachimsthal_check(SPHEROID, [2.0, 0.0, 2.0])


def test_orthogonal_sphere_residual():
    assert o.sphere_s_of_x_residual(SPHERE, [0.0, 3.0, 1.0]) < 1e-10
    assert o.sphere_s_of_x_residual(SPHEROID, [0.0, 0.0, -4.0]) < 1e-8


def test_contact_curve_csv_closes():
    cc = o.contact_curve(SPHERE, [0.0, 0.0, 2.0], n=16)
    lines = cc.to_csv().splitlines()
    assert lines[0] == "x,y,z" and len(lines) == 18
    assert lines[1] == lines[-1]


def test_quartic_surface_is_convex_and_traceable():
    x = np.array([0.0, 0.0, 2.5])
    s = o.tangent_length_spread(QUARTIC, x)
    # The quartic is symmetric under the 4-fold rotation about z, not a surface of revolution.
    assert 1e-9 < s.spread < 1e-1


@pytest.mark.parametrize("name", ["spheroid", "triaxial", "quartic"])
def test_non_spheres_certified_planeless(name):
    scan = o.sample_equitangent_locus(o.corpus_surface(name), o.make_grid(7, 7, 7, -3.0, 3.0), 1e-6, n=64)
    certified, witnesses = o.certify_no_plane(scan)
    assert certified
    assert all(w.spread > 1e-3 for w in witnesses)
