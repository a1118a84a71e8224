"""Focal-angle tests for ellipses and their converse.

Given a convex curve, a tangent line ``ell`` and two interior points ``P``
and ``Q``, every point ``X`` on ``ell`` has a second tangent ``L_X``.  For an
ellipse with foci ``P, Q`` the angle between ``ell`` and ``XP`` equals the
angle between ``L_X`` and ``XQ``, and the products of focal distances to the
two tangents agree.  :func:`converse_check` measures both on a sample of
``X`` and, when the angles agree, compares the curve with the ellipse that
has foci ``P, Q`` and touches ``ell``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .curves2d import Curve, SupportCurve, _wrap
from .errors import GeometryError, PointNotOnLine, XAtTangency
from .geom2d import EPS_GEOM, TWO_PI, Line2, Point2, angle_between, reflect_across_line

ANGLE_TOL = 1e-7
HAUSDORFF_TOL = 1e-6


@dataclass(frozen=True)
class FocalConfig:
    curve: Curve
    P: Point2
    Q: Point2
    ell: Line2
    p0: float

    def __post_init__(self):
        for name, pt in (("P", self.P), ("Q", self.Q)):
            if self.curve.signed_distance(pt) >= -EPS_GEOM:
                raise GeometryError(f"{name} must lie strictly inside the curve")
        touch = self.curve.point_at(self.p0)
        if self.ell.distance(touch) > EPS_GEOM or \
                abs(self.ell.direction.dot(self.curve.normal_at(self.p0))) > 1e-9:
            raise GeometryError("ell is not tangent to the curve at p0")

    @classmethod
    def at_param(cls, curve: Curve, P: Point2, Q: Point2, p0: float) -> FocalConfig:
        return cls(curve, P, Q, Line2(curve.point_at(p0), curve.tangent_at(p0)), p0)

    @classmethod
    def from_line(cls, curve: Curve, P: Point2, Q: Point2, ell: Line2) -> FocalConfig:
        return cls(curve, P, Q, ell, tangency_param(curve, ell))


def tangency_param(curve: Curve, ell: Line2) -> float:
    """Normal angle at which ``ell`` supports ``curve``."""
    best = None
    for n in (ell.normal, -ell.normal):
        t = n.angle() % TWO_PI
        gap = abs(float(curve.h(t)) - ell.point.dot(n))
        if best is None or gap < best[0]:
            best = (gap, t)
    if best[0] > EPS_GEOM:
        raise GeometryError(f"line misses the curve's support line by {best[0]:.3g}")
    return best[1]


def second_tangent(cfg: FocalConfig, X: Point2) -> Line2:
    """The tangent line from ``X`` other than ``ell``."""
    if cfg.ell.distance(X) > EPS_GEOM:
        raise PointNotOnLine("X must lie on ell")
    if X.distance(cfg.curve.point_at(cfg.p0)) <= EPS_GEOM:
        raise XAtTangency("X is the tangency point of ell")
    t1, t2 = cfg.curve.tangents_from(X)
    other = max((t1, t2), key=lambda t: abs(_wrap(t.param - cfg.p0)))
    return Line2(X, other.point - X)


def focal_angle_residual(cfg: FocalConfig, X: Point2) -> float:
    lx = second_tangent(cfg, X)
    return abs(angle_between(cfg.ell, Line2.through(X, cfg.P))
               - angle_between(lx, Line2.through(X, cfg.Q)))


def product_identity_residual(cfg: FocalConfig, X: Point2) -> float:
    """|RP * SQ - PB * QA| with R, S, A, B the feet of P, Q on ell and L_X."""
    lx = second_tangent(cfg, X)
    rp, sq = cfg.ell.distance(cfg.P), cfg.ell.distance(cfg.Q)
    pb, qa = lx.distance(cfg.P), lx.distance(cfg.Q)
    return abs(rp * sq - pb * qa)


def focal_ellipse(P: Point2, Q: Point2, ell: Line2) -> SupportCurve:
    """The ellipse with foci ``P, Q`` tangent to ``ell``.

    Its major axis equals the distance from ``P`` to the mirror image of
    ``Q`` in ``ell``.
    """
    a = 0.5 * P.distance(reflect_across_line(Q, ell))
    c = 0.5 * P.distance(Q)
    if a <= c:
        raise GeometryError("ell separates the foci")
    rotation = (Q - P).angle() if c > 0.0 else 0.0
    return SupportCurve.ellipse(a, math.sqrt(a * a - c * c), (P + Q) * 0.5, rotation)


def hausdorff_distance(a: Curve, b: Curve, n: int = 720) -> float:
    """Hausdorff distance between two convex curves.

    Each curve is sampled at ``n`` points and every sample is measured
    against the exact other curve (distance through its support function).
    """
    worst = 0.0
    for src, dst in ((a, b), (b, a)):
        for x, y in src.sample_points(n):
            worst = max(worst, abs(dst.signed_distance(Point2(float(x), float(y)))))
    return worst


def curve_diameter(curve: Curve) -> float:
    t = np.linspace(0.0, math.pi, 360, endpoint=False)
    return float(np.max(curve.h(t) + curve.h(t + math.pi)))


@dataclass
class ConverseReport:
    max_angle_residual: float
    max_product_residual: float
    hausdorff: float | None
    verdict: str
    n_samples: int
    excluded: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def converse_check(curve: Curve, P: Point2, Q: Point2, ell: Line2, n_samples: int = 64,
                   angle_tol: float = ANGLE_TOL, hausdorff_tol: float = HAUSDORFF_TOL) -> ConverseReport:
    """Sample the focal-angle condition along ``ell`` and compare with the focal ellipse.

    X ranges over ``n_samples`` points within eight diameters of the
    tangency point, skipping a 1e-3 neighbourhood of it and any X whose
    second tangent is nearly parallel to ``ell``.
    """
    cfg = FocalConfig.from_line(curve, P, Q, ell)
    t0 = cfg.ell.parameter_of(curve.point_at(cfg.p0))
    span = 8.0 * curve_diameter(curve)
    max_angle = max_prod = 0.0
    excluded = []
    used = 0
    for s in np.linspace(-span, span, n_samples):
        if abs(s) < 1e-3:
            excluded.append(float(s))
            continue
        X = cfg.ell.at(t0 + float(s))
        lx = second_tangent(cfg, X)
        if angle_between(lx, cfg.ell) < 1e-6:
            excluded.append(float(s))
            continue
        used += 1
        max_angle = max(max_angle, focal_angle_residual(cfg, X))
        max_prod = max(max_prod, product_identity_residual(cfg, X))
    hd = None
    verdict = "not_ellipse"
    if max_angle < angle_tol:
        hd = hausdorff_distance(curve, focal_ellipse(P, Q, cfg.ell))
        if hd < hausdorff_tol:
            verdict = "ellipse"
    return ConverseReport(max_angle, max_prod, hd, verdict, used, excluded)
