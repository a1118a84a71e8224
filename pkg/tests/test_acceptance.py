"""Acceptance criteria, one test each, with runtime budgets.

Run under pytest or directly with ``python tests/test_acceptance.py``; both
print one PASS/FAIL line per criterion.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from equitangent import ovaloid3d as o
from equitangent.constructions import (build_figure1_default, build_radical_polygon,
                                       build_rounded_reuleaux, edge_power_residual,
                                       polygon_vertices, radical_polygon_edges)
from equitangent.curves2d import SupportCurve, equitangent_residual, euclidean_width
from equitangent.ellipse_optics import (FocalConfig, converse_check, focal_angle_residual,
                                        product_identity_residual)
from equitangent.geom2d import Line2, Point2
from equitangent.hyperbolic import (HalfPlanePoint, build_hyperbolic_reuleaux,
                                    equitangent_from_boundary_residual, hyperbolic_disk,
                                    hyperbolic_width_profile)

sys.path.insert(0, str(Path(__file__).parent))
from polar_oracle import hausdorff_to_conic  # noqa: E402

BOUNDARY_XS = np.linspace(-10.0, 10.0, 100)


def circle_equitangency():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        center = Point2(*rng.uniform(-5.0, 5.0, 2))
        r = rng.uniform(0.1, 3.0)
        u = Point2.polar(1.0, rng.uniform(0.0, 2 * math.pi))
        foot = center + u * (r + rng.uniform(0.01, 5.0))
        line = Line2(foot, u.perp())
        locus = [line.at(t) for t in rng.uniform(-20.0, 20.0, 10)]
        worst = max(worst, equitangent_residual(SupportCurve.circle(r, center), locus)[0])
    return worst < 1e-10, f"max residual {worst:.2e} over 1000 pairs"


def figure1_construction():
    fig = build_figure1_default()
    joints = max(max(g, t) for g, t in fig.curve.joint_residuals())

    def outside(line):
        ts = np.linspace(-15.0, 15.0, 400)
        pts = [line.at(float(t)) for t in ts if fig.curve.signed_distance(line.at(float(t))) > 1e-3]
        return [pts[i] for i in np.linspace(0, len(pts) - 1, 50).round().astype(int)]

    on_axis = equitangent_residual(fig.curve, outside(fig.axis))[0]
    shifted = Line2(fig.axis.point + fig.axis.normal * 0.1, fig.axis.direction)
    off_axis = equitangent_residual(fig.curve, outside(shifted))[0]
    ok = joints < 1e-9 and on_axis < 1e-8 and off_axis > 1e-4
    return ok, f"joints {joints:.1e}, axis residual {on_axis:.1e}, shifted line {off_axis:.1e}"


def constant_width():
    theta = np.linspace(0.0, 2 * math.pi, 720, endpoint=False)
    worst = 0.0
    for n in (3, 5, 7):
        for eps in (0.0, 0.25):
            curve, _ = build_rounded_reuleaux(n, 1.0, eps)
            worst = max(worst, float(np.max(np.abs(euclidean_width(curve, theta) - (1.0 + 2 * eps)))))
    return worst < 1e-9, f"max width deviation {worst:.1e}"


def pair_on_polygon():
    n, lam, eps = 5, 1.0, 0.25
    curve, _ = build_rounded_reuleaux(n, lam, eps)
    verts = build_radical_polygon(n, lam, eps)
    edges = radical_polygon_edges(n, lam, eps)
    locus = []
    for i, p in enumerate(verts):
        q = verts[(i + 1) % len(verts)]
        locus += [p + (q - p) * (k / 19) for k in range(20)]
    tangents = equitangent_residual(curve, locus)[0]
    power = edge_power_residual(verts, edges)
    ortho = 0.0
    for i, (small, big) in enumerate(edges):
        edge = (verts[(i + 1) % len(verts)] - verts[i]).unit()
        side = (big.center - small.center).unit()
        ortho = max(ortho, abs(edge.dot(side)))
    ok = tangents < 1e-8 and power < 1e-9 and ortho < 1e-10 and len(verts) == 2 * n
    return ok, f"tangent gap {tangents:.1e}, power {power:.1e}, orthogonality {ortho:.1e}"


def boundary_equitangency_and_width():
    disk = hyperbolic_disk(HalfPlanePoint(0.0, 2.0), 0.7)
    disk_res = equitangent_from_boundary_residual(disk, BOUNDARY_XS)
    widths = [r.width for r in hyperbolic_width_profile(disk, BOUNDARY_XS, 1e-9)]
    disk_spread = max(widths) - min(widths)
    ellipse = SupportCurve.ellipse(2.0, 1.0, Point2(0.0, 3.0))
    ellipse_res = equitangent_from_boundary_residual(ellipse, BOUNDARY_XS)
    witness, _ = build_hyperbolic_reuleaux(5, 1.0, 0.2)
    witness_res = equitangent_from_boundary_residual(witness, BOUNDARY_XS)
    ww = [r.width for r in hyperbolic_width_profile(witness, BOUNDARY_XS, 1e-6)]
    witness_spread = max(ww) - min(ww)
    ok = (disk_res < 1e-9 and disk_spread < 1e-8 and ellipse_res > 1e-3
          and witness_res < 1e-6 and witness_spread < 1e-6)
    return ok, (f"disk {disk_res:.1e}/{disk_spread:.1e}, ellipse {ellipse_res:.2f}, "
                f"witness {witness_res:.1e}/{witness_spread:.1e}")


def focal_identities():
    ellipse = SupportCurve.ellipse(2.0, 1.0)
    foci = (Point2(-math.sqrt(3), 0.0), Point2(math.sqrt(3), 0.0))
    rng = np.random.default_rng(6)
    angle = prod = 0.0
    wrong = 0.0
    for p0 in rng.uniform(0.0, 2 * math.pi, 4):
        cfg = FocalConfig.at_param(ellipse, *foci, float(p0))
        bad = FocalConfig.at_param(ellipse, Point2(-1.0, 0.0), Point2(1.0, 0.0), float(p0))
        t0 = cfg.ell.parameter_of(ellipse.point_at(float(p0)))
        for s in rng.uniform(-12.0, 12.0, 25):
            if abs(s) < 1e-2:
                continue
            x = cfg.ell.at(t0 + s)
            angle = max(angle, focal_angle_residual(cfg, x))
            prod = max(prod, product_identity_residual(cfg, x))
            wrong = max(wrong, focal_angle_residual(bad, x))
    ok = angle < 1e-9 and prod < 1e-8 and wrong > 1e-3
    return ok, f"foci angle {angle:.1e}, product {prod:.1e}, non-foci {wrong:.2f}"


def focal_converse():
    top = Line2(Point2(0.0, 1.0), Point2(1.0, 0.0))
    rot = SupportCurve.ellipse(1.5, 0.8, Point2(0.3, -0.2), 0.6)
    c = math.sqrt(1.5 ** 2 - 0.8 ** 2)
    rot_foci = [Point2(0.3, -0.2) + Point2.polar(s * c, 0.6) for s in (-1, 1)]
    rot_line = Line2(rot.point_at(1.0), rot.tangent_at(1.0))
    bumpy = SupportCurve.fourier(1.5, [0.0, 0.0, 0.0, 0.01], [0.0, 0.0, 0.0, 0.0])
    reuleaux, _ = build_rounded_reuleaux(5, 1.0, 0.25)
    reuleaux_top = Line2(reuleaux.point_at(math.pi / 2), Point2(1.0, 0.0))
    cases = [
        ("ellipse", SupportCurve.ellipse(2.0, 1.0), Point2(-math.sqrt(3), 0), Point2(math.sqrt(3), 0), top),
        ("rotated ellipse", rot, *rot_foci, rot_line),
        ("circle", SupportCurve.circle(1.0), Point2(0, 0), Point2(0, 0), top),
        ("bumpy circle", bumpy, Point2(0, 0), Point2(0, 0), Line2(bumpy.point_at(math.pi / 2), Point2(1, 0))),
        ("reuleaux", reuleaux, Point2(-0.1, 0.0), Point2(0.1, 0.0), reuleaux_top),
    ]
    ok = True
    notes = []
    for name, curve, p, q, ell in cases:
        rep = converse_check(curve, p, q, ell, n_samples=64, angle_tol=1e-7, hausdorff_tol=1e-6)
        passed_angles = rep.max_angle_residual < 1e-7
        if passed_angles:
            ok &= rep.hausdorff < 1e-6
        if name in ("reuleaux", "bumpy circle"):
            ok &= rep.verdict == "not_ellipse"
        else:
            ok &= rep.verdict == "ellipse"
        notes.append(f"{name}:{rep.verdict}")
    return ok, ", ".join(notes)


def locus_scans():
    grid = o.make_grid(11, 11, 11, -3.0, 3.0)
    sphere = o.sample_equitangent_locus(o.corpus_surface("sphere"), grid, 1e-8)
    sphere_ok = bool(np.all(sphere.spreads[sphere.exterior] < 1e-8)) and \
        len(sphere.points) == int(sphere.exterior.sum())
    spheroid = o.sample_equitangent_locus(o.corpus_surface("spheroid"), grid, 1e-6)
    axis_dist = float(np.max(np.hypot(spheroid.points[:, 0], spheroid.points[:, 1]))) \
        if len(spheroid.points) else 0.0
    certified, _ = o.certify_no_plane(spheroid)
    triaxial = o.sample_equitangent_locus(o.corpus_surface("triaxial"), grid, 1e-6)
    lines = o.find_lines(triaxial.points)
    tri_certified, _ = o.certify_no_plane(triaxial)
    ok = sphere_ok and axis_dist < 1e-6 and certified and len(lines) < 3 and tri_certified
    return ok, (f"sphere {len(sphere.points)} points, spheroid {len(spheroid.points)} points "
                f"(axis dist {axis_dist:.0e}), triaxial {len(triaxial.points)} points, {len(lines)} lines")


def umbilics():
    m = o.corpus_surface("triaxial")
    scan = o.umbilic_scan(m, n=10_000, tol=1e-6)
    truth = m.umbilics()
    matched = all(np.min(np.linalg.norm(truth - p, axis=1)) < 1e-4 for p in scan.points)
    covered = all(np.min(np.linalg.norm(scan.points - t, axis=1)) < 1e-4 for t in truth) \
        if len(scan.points) else False
    sphere = o.corpus_surface("sphere")
    pts = o.surface_points(sphere, np.random.default_rng(9).normal(size=(500, 3)))
    sphere_ok = all(o.is_umbilic(sphere, p) for p in pts)
    ok = len(scan.points) == 4 and matched and covered and sphere_ok and not scan.all_umbilic
    return ok, f"{len(scan.points)} umbilic clusters, sphere umbilic at 500 points: {sphere_ok}"


def curvature_lines_and_polar_conics():
    mis = o.joachimsthal_check(o.corpus_surface("spheroid"), [0.0, 0.0, 3.0], n=256)
    worst = 0.0
    sources = [(0.0, 0.0, 3.0), (2.0, 0.5, -1.0), (-1.3, 2.7, 2.2), (4.0, -3.0, 0.5)]
    for name in ("sphere", "spheroid", "triaxial"):
        m = o.corpus_surface(name)
        for x in sources:
            cc = o.contact_curve(m, x)
            worst = max(worst, hausdorff_to_conic(m.axes, x, m.interior_point, cc.points))
    return mis < 1e-6 and worst < 1e-8, f"misalignment {mis:.1e}, conic Hausdorff {worst:.1e}"


CRITERIA = {
    1: ("circle equitangency", circle_equitangency, 5.0),
    2: ("four-arc construction", figure1_construction, 5.0),
    3: ("constant width", constant_width, 5.0),
    4: ("curve and polygon pair", pair_on_polygon, 10.0),
    5: ("boundary equitangency and hyperbolic width", boundary_equitangency_and_width, 10.0),
    6: ("focal identities", focal_identities, 5.0),
    7: ("focal converse", focal_converse, 10.0),
    8: ("equitangent locus scans", locus_scans, 60.0),
    9: ("umbilic scan", umbilics, 30.0),
    10: ("curvature lines and polar conics", curvature_lines_and_polar_conics, 10.0),
}


def run_criterion(number):
    name, fn, budget = CRITERIA[number]
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    passed = ok and elapsed < budget
    line = (f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {name}: {detail}; "
            f"{elapsed:.2f}s (budget {budget:g}s)")
    return passed, ok, elapsed, budget, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_acceptance(number, capsys):
    passed, ok, elapsed, budget, line = run_criterion(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert elapsed < budget, line


if __name__ == "__main__":
    results = [run_criterion(k) for k in sorted(CRITERIA)]
    for r in results:
        print(r[-1])
    sys.exit(0 if all(r[0] for r in results) else 1)
