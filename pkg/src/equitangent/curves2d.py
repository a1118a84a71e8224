"""Strictly convex closed planar curves and tangents from exterior points.

Two representations are supported:

* :class:`SupportCurve` -- a smooth curve given by its support function
  ``h(theta)``; the boundary point with outward normal
  ``u = (cos theta, sin theta)`` is ``h u + h' u_perp``.
* :class:`ArcSplineCurve` -- a closed C1 chain of counterclockwise circular
  arcs, possibly including zero-radius arcs that model corners.

For both, the curve parameter is the outward normal angle.  That makes
``param`` comparable across representations and turns the tangency
condition for a source point ``x`` into ``h(theta) = x . u(theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import InvalidCurve, NotConvex, PointNotExterior, TangencyNotFound
from .geom2d import EPS_GEOM, TWO_PI, Arc2, Circle2, Line2, Point2, unit_vector

GRID_SIZE = 720

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class TangentData:
    """One tangency from a source point: contact point, segment length, normal angle."""

    point: Point2
    length: float
    param: float


def _root_in(fun: Callable[[float], float], lo: float, hi: float) -> float:
    """Brent's method on [lo, hi]; an endpoint within rounding of zero is accepted as is."""
    flo, fhi = fun(lo), fun(hi)
    if flo * fhi > 0.0:
        # The grid node sits on the root and the two evaluations disagree in the last bit.
        if min(abs(flo), abs(fhi)) > 1e-13:
            raise TangencyNotFound("tangency bracket lost its sign change")
        return lo if abs(flo) < abs(fhi) else hi
    return brentq(fun, lo, hi, xtol=1e-14)


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(angle + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi


class SupportCurve:
    """Smooth strictly convex curve described by its support function.

    ``h``, ``dh`` and ``d2h`` must accept floats and numpy arrays.  When
    ``check`` is true the radius of curvature ``h + h''`` is verified to be
    positive on a 720-point grid and periodicity is checked.
    """

    def __init__(self, h: Callable[[ArrayLike], ArrayLike],
                 dh: Callable[[ArrayLike], ArrayLike],
                 d2h: Callable[[ArrayLike], ArrayLike],
                 *, samples: tuple[np.ndarray, np.ndarray] | None = None,
                 check: bool = True):
        self.h = h
        self.dh = dh
        self.d2h = d2h
        self.samples = samples
        self._grid = np.linspace(0.0, TWO_PI, GRID_SIZE, endpoint=False)
        self._cos = np.cos(self._grid)
        self._sin = np.sin(self._grid)
        self._hgrid = np.asarray(h(self._grid), dtype=float)
        if check:
            rho = self._hgrid + np.asarray(d2h(self._grid), dtype=float)
            if not np.all(rho > 0.0):
                raise NotConvex("h + h'' must be positive everywhere")
            if abs(float(h(0.0)) - float(h(TWO_PI))) >= 1e-12:
                raise InvalidCurve("support function is not 2pi-periodic")

    # -- constructors -----------------------------------------------------

    @classmethod
    def circle(cls, radius: float, center: Point2 = Point2(0.0, 0.0)) -> SupportCurve:
        cx, cy = center
        return cls(
            lambda t: radius + cx * np.cos(t) + cy * np.sin(t),
            lambda t: -cx * np.sin(t) + cy * np.cos(t),
            lambda t: -cx * np.cos(t) - cy * np.sin(t),
        )

    @classmethod
    def ellipse(cls, a: float, b: float, center: Point2 = Point2(0.0, 0.0),
                rotation: float = 0.0) -> SupportCurve:
        """Ellipse with semi-axes ``a`` (along ``rotation``) and ``b``."""
        cx, cy = center
        k = b * b - a * a

        def q(t):
            s = t - rotation
            return a * a * np.cos(s) ** 2 + b * b * np.sin(s) ** 2

        def h(t):
            return np.sqrt(q(t)) + cx * np.cos(t) + cy * np.sin(t)

        def dh(t):
            s = t - rotation
            return 0.5 * k * np.sin(2 * s) / np.sqrt(q(t)) - cx * np.sin(t) + cy * np.cos(t)

        def d2h(t):
            s = t - rotation
            r = np.sqrt(q(t))
            dq = k * np.sin(2 * s)
            d2q = 2.0 * k * np.cos(2 * s)
            return d2q / (2.0 * r) - dq * dq / (4.0 * r ** 3) - cx * np.cos(t) - cy * np.sin(t)

        return cls(h, dh, d2h)

    @classmethod
    def fourier(cls, a0: float, cos_coeffs: Sequence[float], sin_coeffs: Sequence[float],
                **kwargs) -> SupportCurve:
        """``h = a0 + sum_k a_k cos(k t) + b_k sin(k t)`` for k = 1..m."""
        a = np.asarray(cos_coeffs, dtype=float)
        b = np.asarray(sin_coeffs, dtype=float)
        k = np.arange(1, len(a) + 1, dtype=float)

        def _eval(t, order):
            t = np.asarray(t, dtype=float)
            kt = np.multiply.outer(t, k)
            c, s = np.cos(kt), np.sin(kt)
            kp = k ** order
            if order == 0:
                out = a0 + c @ a + s @ b
            elif order == 1:
                out = s @ (-a * kp) + c @ (b * kp)
            else:
                out = -(c @ (a * kp) + s @ (b * kp))
            return float(out) if out.ndim == 0 else out

        return cls(lambda t: _eval(t, 0), lambda t: _eval(t, 1), lambda t: _eval(t, 2), **kwargs)

    @classmethod
    def from_samples(cls, thetas: Sequence[float], values: Sequence[float], **kwargs) -> SupportCurve:
        """Least-squares trigonometric fit of degree ``(N - 1) // 2``.

        For N odd and equally spaced samples this is exact interpolation.
        """
        t = np.asarray(thetas, dtype=float)
        v = np.asarray(values, dtype=float)
        m = (len(t) - 1) // 2
        if m < 1:
            raise InvalidCurve("need at least three support samples")
        k = np.arange(1, m + 1)
        design = np.hstack([np.ones((len(t), 1)), np.cos(np.outer(t, k)), np.sin(np.outer(t, k))])
        coef, *_ = np.linalg.lstsq(design, v, rcond=None)
        return cls.fourier(coef[0], coef[1:m + 1], coef[m + 1:], samples=(t, v), **kwargs)

    # -- geometry ---------------------------------------------------------

    def point_at(self, theta: float) -> Point2:
        h = float(self.h(theta))
        dh = float(self.dh(theta))
        c, s = math.cos(theta), math.sin(theta)
        return Point2(h * c - dh * s, h * s + dh * c)

    def tangent_at(self, theta: float) -> Point2:
        return Point2(-math.sin(theta), math.cos(theta))

    def normal_at(self, theta: float) -> Point2:
        return unit_vector(theta)

    def sample_points(self, n: int = GRID_SIZE) -> np.ndarray:
        t = np.linspace(0.0, TWO_PI, n, endpoint=False)
        h, dh = np.asarray(self.h(t)), np.asarray(self.dh(t))
        c, s = np.cos(t), np.sin(t)
        return np.column_stack([h * c - dh * s, h * s + dh * c])

    def signed_distance(self, x: Point2) -> float:
        f = x.x * self._cos + x.y * self._sin - self._hgrid
        return self._refine_max(x, f)[1]

    def _refine_max(self, x: Point2, f: np.ndarray) -> tuple[float, float]:
        """Maximize ``x . u - h`` starting from the best grid node."""
        k = int(np.argmax(f))
        step = TWO_PI / GRID_SIZE
        t0 = self._grid[k]
        res = minimize_scalar(
            lambda t: float(self.h(t)) - x.x * math.cos(t) - x.y * math.sin(t),
            bounds=(t0 - step, t0 + step), method="bounded", options={"xatol": 1e-13},
        )
        if -res.fun > f[k]:
            return float(res.x), float(-res.fun)
        return float(t0), float(f[k])

    def tangents_from(self, x: Point2) -> tuple[TangentData, TangentData]:
        f = x.x * self._cos + x.y * self._sin - self._hgrid
        k = int(np.argmax(f))
        if f[k] > 1e-6:
            t_star, sd = float(self._grid[k]), float(f[k])
        else:
            t_star, sd = self._refine_max(x, f)
        if sd <= EPS_GEOM or abs(winding_number(self, x)) >= 0.5:
            raise PointNotExterior(f"point ({x.x}, {x.y}) is not exterior")
        g = -f
        signs = g > 0.0
        if np.count_nonzero(signs != np.roll(signs, 1)) > 2:
            raise TangencyNotFound("more than two sign changes: curve is not convex")

        def gfun(t):
            return float(self.h(t)) - x.x * math.cos(t) - x.y * math.sin(t)

        psi = (self._grid - t_star + math.pi) % TWO_PI - math.pi
        order = np.argsort(psi)
        psi, gs = psi[order], g[order]
        roots = []
        neg = psi < 0.0
        left = np.nonzero(neg & (gs > 0.0))[0]
        right = np.nonzero(~neg & (gs > 0.0))[0]
        if len(left) == 0 or len(right) == 0:
            raise TangencyNotFound("could not bracket two tangencies")
        i = left[-1]
        lo, hi = psi[i], (psi[i + 1] if psi[i + 1] < 0.0 else 0.0)
        roots.append(_root_in(lambda s: gfun(t_star + s), lo, hi))
        j = right[0]
        lo, hi = (psi[j - 1] if psi[j - 1] >= 0.0 else 0.0), psi[j]
        roots.append(_root_in(lambda s: gfun(t_star + s), lo, hi))
        out = []
        for r in roots:
            t = (t_star + r) % TWO_PI
            p = self.point_at(t)
            out.append(TangentData(p, p.distance(x), t))
        return _ccw_from(x, out[0], out[1])


class ArcSplineCurve:
    """Closed convex curve made of circular arcs joined with C1 continuity.

    Clockwise input is reversed so the stored curve always runs
    counterclockwise.  Zero-radius arcs are corners: the position is
    stationary while the normal turns, so the curve is not C1 there.  Their
    indices are listed in :attr:`corners`.
    """

    def __init__(self, arcs: Sequence[Arc2], *, check: bool = True,
                 position_tol: float = EPS_GEOM, tangent_tol: float = 1e-9):
        arcs = list(arcs)
        if not arcs:
            raise InvalidCurve("empty arc list")
        orientations = {a.ccw for a in arcs}
        if len(orientations) != 1:
            raise NotConvex("arcs turn in different directions")
        if not arcs[0].ccw:
            arcs = [a.reversed() for a in reversed(arcs)]
        self.arcs: tuple[Arc2, ...] = tuple(arcs)
        self.corners = tuple(i for i, a in enumerate(arcs) if a.circle.radius == 0.0)
        self._cx = np.array([a.circle.center.x for a in arcs])
        self._cy = np.array([a.circle.center.y for a in arcs])
        self._r = np.array([a.circle.radius for a in arcs])
        sweeps = np.array([a.sweep for a in arcs])
        self._base = arcs[0].start_angle % TWO_PI
        self._offsets = np.concatenate([[0.0], np.cumsum(sweeps)[:-1]])
        if check:
            self.validate(position_tol, tangent_tol)

    def joint_residuals(self) -> list[tuple[float, float]]:
        """(position gap, tangent-angle gap) at the end of each arc."""
        out = []
        for a, b in zip(self.arcs, self.arcs[1:] + self.arcs[:1]):
            gap = a.end_point.distance(b.start_point)
            turn = abs(_wrap(a.end_angle - b.start_angle))
            out.append((gap, turn))
        return out

    @property
    def total_turning(self) -> float:
        return float(sum(a.sweep for a in self.arcs))

    @property
    def length(self) -> float:
        return float(sum(a.length for a in self.arcs))

    def validate(self, position_tol: float = EPS_GEOM, tangent_tol: float = 1e-9) -> None:
        for i, (gap, turn) in enumerate(self.joint_residuals()):
            if gap > position_tol:
                raise InvalidCurve(f"arcs {i} and {i + 1} do not meet (gap {gap:.3g})")
            if turn > tangent_tol:
                raise InvalidCurve(f"tangent jumps by {turn:.3g} rad at joint {i}")
        if abs(self.total_turning - TWO_PI) > 1e-9:
            raise InvalidCurve(f"total turning {self.total_turning!r} is not 2pi")

    # -- support function -------------------------------------------------

    def arc_index(self, theta: ArrayLike) -> ArrayLike:
        o = (np.asarray(theta, dtype=float) - self._base) % TWO_PI
        idx = np.searchsorted(self._offsets, o, side="right") - 1
        return np.clip(idx, 0, len(self.arcs) - 1)

    def h(self, theta: ArrayLike) -> ArrayLike:
        i = self.arc_index(theta)
        out = self._cx[i] * np.cos(theta) + self._cy[i] * np.sin(theta) + self._r[i]
        return float(out) if np.ndim(out) == 0 else out

    def dh(self, theta: ArrayLike) -> ArrayLike:
        i = self.arc_index(theta)
        out = -self._cx[i] * np.sin(theta) + self._cy[i] * np.cos(theta)
        return float(out) if np.ndim(out) == 0 else out

    def d2h(self, theta: ArrayLike) -> ArrayLike:
        i = self.arc_index(theta)
        out = -self._cx[i] * np.cos(theta) - self._cy[i] * np.sin(theta)
        return float(out) if np.ndim(out) == 0 else out

    # -- geometry ---------------------------------------------------------

    def point_at(self, theta: float) -> Point2:
        a = self.arcs[int(self.arc_index(theta))]
        return a.circle.point_at(theta)

    def tangent_at(self, theta: float) -> Point2:
        return Point2(-math.sin(theta), math.cos(theta))

    def normal_at(self, theta: float) -> Point2:
        return unit_vector(theta)

    def sample_points(self, n: int = GRID_SIZE) -> np.ndarray:
        pts = [p for p, _ in arcspline_to_samples(self, n)]
        return np.array([[p.x, p.y] for p in pts])

    def signed_distance(self, x: Point2) -> float:
        best = -math.inf
        for a in self.arcs:
            v = x - a.circle.center
            t = v.angle()
            if a.contains_angle(t):
                val = v.norm() - a.circle.radius
            else:
                val = max(v.dot(unit_vector(a.start_angle)), v.dot(unit_vector(a.end_angle)))
                val -= a.circle.radius
            best = max(best, val)
        return best

    def tangents_from(self, x: Point2) -> tuple[TangentData, TangentData]:
        if self.signed_distance(x) <= EPS_GEOM or abs(winding_number(self, x)) >= 0.5:
            raise PointNotExterior(f"point ({x.x}, {x.y}) is not exterior")
        found: list[TangentData] = []
        for a in self.arcs:
            c, r = a.circle.center, a.circle.radius
            v = x - c
            d = v.norm()
            if d <= r:
                continue
            phi = v.angle()
            alpha = math.acos(r / d)
            for t in (phi + alpha, phi - alpha):
                if not a.contains_angle(t, tol=1e-9):
                    continue
                t %= TWO_PI
                if any(abs(_wrap(t - f.param)) < 1e-8 for f in found):
                    continue
                p = a.circle.point_at(t)
                found.append(TangentData(p, p.distance(x), t))
        if len(found) != 2:
            raise TangencyNotFound(f"expected two tangencies, found {len(found)}")
        return _ccw_from(x, found[0], found[1])


Curve = Union[SupportCurve, ArcSplineCurve]


def _ccw_from(x: Point2, t1: TangentData, t2: TangentData) -> tuple[TangentData, TangentData]:
    if (t1.point - x).cross(t2.point - x) < 0.0:
        return t2, t1
    return t1, t2


def point_at(curve: Curve, param: float) -> Point2:
    return curve.point_at(param)


def tangent_at(curve: Curve, param: float) -> Point2:
    return curve.tangent_at(param)


def normal_at(curve: Curve, param: float) -> Point2:
    return curve.normal_at(param)


def support_line(curve: Curve, param: float) -> Line2:
    return Line2(curve.point_at(param), curve.tangent_at(param))


def winding_number(curve: Curve, x: Point2, n: int = GRID_SIZE) -> float:
    cache = curve.__dict__.setdefault("_sample_cache", {})
    if n not in cache:
        cache[n] = curve.sample_points(n)
    pts = cache[n] - np.array([x.x, x.y])
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    d = np.diff(np.concatenate([ang, ang[:1]]))
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return float(d.sum() / (2 * np.pi))


def signed_distance(curve: Curve, x: Point2) -> float:
    """Distance to the curve, negative inside (exact for convex bodies)."""
    return curve.signed_distance(x)


def is_exterior(curve: Curve, x: Point2, tol: float = EPS_GEOM) -> bool:
    return curve.signed_distance(x) > tol and abs(winding_number(curve, x)) < 0.5


def tangents_from_point(curve: Curve, x: Point2) -> tuple[TangentData, TangentData]:
    return curve.tangents_from(x)


def equitangent_residual(curve: Curve, locus: Sequence[Point2]) -> tuple[float, Point2]:
    """Largest difference between the two tangent lengths over ``locus``."""
    worst, worst_point = -1.0, None
    for i, x in enumerate(locus):
        try:
            t1, t2 = curve.tangents_from(x)
        except PointNotExterior:
            raise PointNotExterior(f"point ({x.x}, {x.y}) is not exterior", index=i) from None
        r = abs(t1.length - t2.length)
        if r > worst:
            worst, worst_point = r, x
    return worst, worst_point


def euclidean_width(curve: Curve, theta: ArrayLike) -> ArrayLike:
    return curve.h(theta) + curve.h(np.asarray(theta) + math.pi)


def arcspline_to_samples(curve: ArcSplineCurve, n: int) -> list[tuple[Point2, Point2]]:
    """``n`` counterclockwise samples equally spaced in arclength."""
    if n < 3:
        raise ValueError("need at least 3 samples")
    lengths = [a.length for a in curve.arcs]
    total = sum(lengths)
    out = []
    i, acc = 0, 0.0
    for k in range(n):
        s = total * k / n
        while i < len(lengths) - 1 and s >= acc + lengths[i]:
            acc += lengths[i]
            i += 1
        a = curve.arcs[i]
        frac = 0.0 if lengths[i] == 0.0 else (s - acc) / lengths[i]
        theta = a.angle_at(frac)
        out.append((a.circle.point_at(theta), a.tangent_at_angle(theta)))
    return out


def tangent_circle_leaf_residual(curve: Curve, p_param: float, params: Sequence[float]) -> float:
    """How far ``curve`` is from being tangent to the circles touching it at ``p``.

    The circles tangent to the support line at ``p = point_at(p_param)``
    foliate the plane minus ``p``.  For each sample point ``y`` the leaf
    through ``y`` is found and the sine of the angle between its normal and
    the curve normal at ``y`` is recorded.  Zero everywhere means every
    tangent segment pair from the support line is equal, i.e. the curve is
    itself a leaf.
    """
    p = curve.point_at(p_param)
    n_p = curve.normal_at(p_param)
    worst = 0.0
    for s in params:
        if abs(_wrap(s - p_param)) < 1e-6:
            continue
        y = curve.point_at(s)
        w = p - y
        rho = w.dot(w) / (2.0 * w.dot(n_p))
        center = p - n_p * rho
        worst = max(worst, abs((y - center).unit().cross(curve.normal_at(s))))
    return worst


# -- serialization ------------------------------------------------------------

def curve_to_dict(curve: Curve, n_samples: int = 257) -> dict:
    if isinstance(curve, ArcSplineCurve):
        return {
            "type": "arcspline",
            "arcs": [
                {"cx": a.circle.center.x, "cy": a.circle.center.y, "r": a.circle.radius,
                 "a0": a.start_angle, "a1": a.end_angle, "ccw": a.ccw}
                for a in curve.arcs
            ],
        }
    if curve.samples is not None:
        t, v = curve.samples
    else:
        t = np.linspace(0.0, TWO_PI, n_samples, endpoint=False)
        v = np.asarray(curve.h(t), dtype=float)
    return {"type": "support",
            "samples": [{"theta": float(a), "h": float(b)} for a, b in zip(t, v)]}


def curve_from_dict(data: dict) -> Curve:
    kind = data.get("type")
    if kind == "arcspline":
        arcs = [Arc2(Circle2(Point2(float(a["cx"]), float(a["cy"])), float(a["r"])),
                     float(a["a0"]), float(a["a1"]), bool(a.get("ccw", True)))
                for a in data["arcs"]]
        return ArcSplineCurve(arcs)
    if kind == "support":
        s = data["samples"]
        return SupportCurve.from_samples([float(e["theta"]) for e in s], [float(e["h"]) for e in s])
    raise InvalidCurve(f"unknown curve type {kind!r}")
