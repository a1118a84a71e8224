"""Tangent cones, contact curves and curvature lines of implicit ovaloids.

An ovaloid is given implicitly by ``F = 0`` with ``F < 0`` inside.  For an
exterior source ``x`` the contact curve is the solution set of

    F(p) = 0,    grad F(p) . (p - x) = 0.

It is traced by predictor-corrector continuation in the angle ``t`` of the
half-plane through the axis ``x -> interior point``: the predictor steps
along the curve tangent (the null vector of the 2x3 Jacobian) and the
corrector runs Newton on the two equations plus the half-plane constraint.
All routines work on batches of sources at once so that grid scans stay
fast; results never depend on how a batch is split.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial import cKDTree

from .errors import (ContinuationFailed, GeometryError, NotConvex, NotEquitangentSource,
                     NotOnSurface, PointNotExterior)

SURFACE_TOL = 1e-9
CORRECTOR_TOL = 1e-11
DEFAULT_SAMPLES = 256
# Sources with F below this are treated as on the surface and skipped by scans.
EXTERIOR_MARGIN = 1e-6
UMBILIC_DEGENERACY = 1e-7


class ImplicitOvaloid:
    """Closed strictly convex surface ``F = 0``.

    Subclasses provide vectorized ``F``, ``grad`` and ``hess`` acting on
    arrays whose last axis has length 3.
    """

    name = "ovaloid"
    interior_point = np.zeros(3)

    def F(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def grad(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def hess(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def check_convexity(self, n: int = 2000) -> None:
        """Raise :class:`NotConvex` unless the second fundamental form is positive at samples."""
        p = surface_points(self, fibonacci_sphere(n))
        g = self.grad(p)
        if np.any(np.linalg.norm(g, axis=-1) < 1e-12):
            raise NotConvex("gradient vanishes on the surface")
        k1, k2, _, _ = _curvature_batch(self, p)
        if np.any(k2 <= 0.0):
            raise NotConvex("second fundamental form is not positive definite")


class Ellipsoid(ImplicitOvaloid):
    """``x^2/a^2 + y^2/b^2 + z^2/c^2 - 1``."""

    def __init__(self, a: float, b: float, c: float, name: str | None = None):
        if min(a, b, c) <= 0.0:
            raise NotConvex("semi-axes must be positive")
        self.axes = np.array([a, b, c], dtype=float)
        self._inv2 = 1.0 / self.axes ** 2
        self.name = name or f"ellipsoid({a:g},{b:g},{c:g})"

    def F(self, p):
        return np.sum(p * p * self._inv2, axis=-1) - 1.0

    def grad(self, p):
        return 2.0 * p * self._inv2

    def hess(self, p):
        h = np.diag(2.0 * self._inv2)
        return np.broadcast_to(h, p.shape[:-1] + (3, 3))

    def polar_plane(self, x: np.ndarray) -> tuple[np.ndarray, float]:
        """Plane ``n . p = 1`` through the contact points of the cone from ``x``."""
        return np.asarray(x, dtype=float) * self._inv2, 1.0

    def umbilics(self) -> np.ndarray:
        """Closed-form umbilic points when the three semi-axes are distinct."""
        order = np.argsort(-self.axes)
        a, b, c = self.axes[order]
        if not (a > b > c):
            raise GeometryError("closed form needs three distinct semi-axes")
        u = math.sqrt(a * a * (a * a - b * b) / (a * a - c * c))
        w = math.sqrt(c * c * (b * b - c * c) / (a * a - c * c))
        out = []
        for su in (1.0, -1.0):
            for sw in (1.0, -1.0):
                q = np.zeros(3)
                q[order[0]], q[order[2]] = su * u, sw * w
                out.append(q)
        return np.array(out)


class QuarticOvaloid(ImplicitOvaloid):
    """``|p|^2 - 1 + delta (x^4 + y^4 + z^4)``: a non-quadric test surface."""

    def __init__(self, delta: float = 0.1):
        self.delta = float(delta)
        self.name = f"quartic({delta:g})"
        self.check_convexity()

    def F(self, p):
        return np.sum(p * p, axis=-1) - 1.0 + self.delta * np.sum(p ** 4, axis=-1)

    def grad(self, p):
        return 2.0 * p + 4.0 * self.delta * p ** 3

    def hess(self, p):
        d = 2.0 + 12.0 * self.delta * p * p
        out = np.zeros(p.shape[:-1] + (3, 3))
        for i in range(3):
            out[..., i, i] = d[..., i]
        return out


class FunctionOvaloid(ImplicitOvaloid):
    """Ovaloid from user-supplied vectorized callables (not picklable)."""

    def __init__(self, F: Callable, grad: Callable, hess: Callable,
                 interior_point=(0.0, 0.0, 0.0), name: str = "custom", check: bool = True):
        self._F, self._grad, self._hess = F, grad, hess
        self.interior_point = np.asarray(interior_point, dtype=float)
        self.name = name
        if check:
            self.check_convexity()

    def F(self, p):
        return self._F(p)

    def grad(self, p):
        return self._grad(p)

    def hess(self, p):
        return self._hess(p)


def sphere(radius: float = 1.0) -> Ellipsoid:
    return Ellipsoid(radius, radius, radius, name=f"sphere({radius:g})")


CORPUS = {
    "sphere": lambda *a: sphere(*(a or (1.0,))),
    "spheroid": lambda *a: Ellipsoid(*(a or (1.0, 1.0, 1.5))),
    "triaxial": lambda *a: Ellipsoid(*(a or (1.0, 1.2, 1.5))),
    "ellipsoid": lambda *a: Ellipsoid(*a),
    "quartic": lambda *a: QuarticOvaloid(*(a or (0.1,))),
}


def corpus_surface(name: str, params=()) -> ImplicitOvaloid:
    try:
        factory = CORPUS[name]
    except KeyError:
        raise GeometryError(f"unknown surface {name!r}; choose from {sorted(CORPUS)}") from None
    return factory(*[float(v) for v in params])


# -- surface sampling ----------------------------------------------------------------

def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def surface_points(M: ImplicitOvaloid, directions: np.ndarray) -> np.ndarray:
    """Where rays from the interior point in the given directions meet the surface."""
    u = directions / np.linalg.norm(directions, axis=-1, keepdims=True)
    c = M.interior_point
    r = np.ones(u.shape[:-1])
    for _ in range(200):
        inside = M.F(c + r[..., None] * u) <= 0.0
        if not inside.any():
            break
        r = np.where(inside, 2.0 * r, r)
    # Newton from outside is monotone for a convex F along the ray.
    for _ in range(100):
        p = c + r[..., None] * u
        step = M.F(p) / np.sum(M.grad(p) * u, axis=-1)
        r = r - step
        if np.all(np.abs(step) <= 1e-15 * r):
            break
    return c + r[..., None] * u


def project_to_surface(M: ImplicitOvaloid, p) -> np.ndarray:
    return surface_points(M, np.asarray(p, dtype=float) - M.interior_point)


def exterior_mask(M: ImplicitOvaloid, X: np.ndarray, margin: float = EXTERIOR_MARGIN,
                  n_segment: int = 64) -> np.ndarray:
    """F(x) > margin and the segment to the interior point crosses F = 0 exactly once."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    s = np.linspace(0.0, 1.0, n_segment)
    seg = X[:, None, :] + s[None, :, None] * (M.interior_point - X)[:, None, :]
    sign = M.F(seg) > 0.0
    crossings = np.count_nonzero(sign[:, 1:] != sign[:, :-1], axis=1)
    return (M.F(X) > margin) & (crossings == 1)


# -- contact curves ------------------------------------------------------------------

@dataclass(frozen=True)
class ContactCurve:
    source: np.ndarray
    points: np.ndarray
    tangents: np.ndarray

    def lengths(self) -> np.ndarray:
        return np.linalg.norm(self.points - self.source, axis=-1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,y,z\n")
        for p in np.vstack([self.points, self.points[:1]]):
            buf.write(",".join(format(float(v), ".17g") for v in p) + "\n")
        return buf.getvalue()


def _frames(M: ImplicitOvaloid, X: np.ndarray):
    e0 = M.interior_point - X
    e0 /= np.linalg.norm(e0, axis=-1, keepdims=True)
    helper = np.eye(3)[np.argmin(np.abs(e0), axis=-1)]
    e1 = helper - np.sum(helper * e0, axis=-1, keepdims=True) * e0
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(e0, e1)
    return e0, e1, e2


def _tangency(M, P, X):
    G = M.grad(P)
    H = M.hess(P)
    d = P - X
    g = np.sum(G * d, axis=-1)
    dg = np.einsum("...ij,...j->...i", H, d) + G
    return G, g, dg


def _seed(M, X, e0, e1):
    """Contact point in the half-plane spanned by e1, found by bisection on the section."""
    lo = np.full(len(X), -0.5 * math.pi)
    hi = np.full(len(X), 0.5 * math.pi)
    for _ in range(56):
        mid = 0.5 * (lo + hi)
        v = np.cos(mid)[:, None] * e1 + np.sin(mid)[:, None] * e0
        s = surface_points(M, v)
        g = np.sum(M.grad(s) * (s - X), axis=-1)
        neg = g < 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    mid = 0.5 * (lo + hi)
    return surface_points(M, np.cos(mid)[:, None] * e1 + np.sin(mid)[:, None] * e0)


def _correct(M, P, X, normal, side):
    """Newton on (F, tangency, half-plane); returns corrected points and success mask."""
    ok = np.zeros(len(P), dtype=bool)
    for it in range(40):
        G, g, dg = _tangency(M, P, X)
        R = np.stack([M.F(P), g, np.sum((P - X) * normal, axis=-1)], axis=-1)
        J = np.stack([G, dg, normal], axis=-2)
        delta = np.linalg.solve(J, R[..., None])[..., 0]
        P = P - delta
        size = np.linalg.norm(delta, axis=-1)
        if np.all(size < 1e-3 * CORRECTOR_TOL):
            break
    F = M.F(P)
    _, g, _ = _tangency(M, P, X)
    ok = (np.abs(F) < CORRECTOR_TOL) & (np.abs(g) < CORRECTOR_TOL) \
        & (np.sum((P - X) * side, axis=-1) > 0.0)
    return P, ok


def _curve_tangent(M, P, X, normal):
    G, _, dg = _tangency(M, P, X)
    T = np.cross(G, dg)
    T /= np.linalg.norm(T, axis=-1, keepdims=True)
    sign = np.sign(np.sum(T * normal, axis=-1))
    return T * np.where(sign == 0.0, 1.0, sign)[:, None]


def contact_curves(M: ImplicitOvaloid, X: np.ndarray, n: int = DEFAULT_SAMPLES):
    """Trace the contact curves of a batch of exterior sources.

    Returns points and unit tangents of shape ``(N, n, 3)``; raises
    :class:`ContinuationFailed` if any source fails to converge or the
    traced curve does not close.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    e0, e1, e2 = _frames(M, X)
    P = _seed(M, X, e0, e1)
    pts = np.empty((len(X), n, 3))
    tans = np.empty((len(X), n, 3))
    P, ok = _correct(M, P, X, e2, e1)
    if not ok.all():
        raise ContinuationFailed("could not seed the contact curve")
    for k in range(n + 1):
        t = 2.0 * math.pi * k / n
        w = math.cos(t) * e1 + math.sin(t) * e2
        nrm = -math.sin(t) * e1 + math.cos(t) * e2
        if k > 0:
            P, ok = _correct(M, P, X, nrm, w)
            if not ok.all():
                raise ContinuationFailed(f"corrector failed at step {k} of {n}")
        if k == n:
            gap = np.linalg.norm(P - pts[:, 0], axis=-1)
            if np.any(gap > 1e-8):
                raise ContinuationFailed("traced contact curve does not close")
            break
        T = _curve_tangent(M, P, X, nrm)
        pts[:, k], tans[:, k] = P, T
        t1 = 2.0 * math.pi * (k + 1) / n
        n1 = -math.sin(t1) * e1 + math.cos(t1) * e2
        step = -np.sum((P - X) * n1, axis=-1) / np.sum(T * n1, axis=-1)
        P = P + step[:, None] * T
    return pts, tans


def _require_exterior(M, x):
    x = np.asarray(x, dtype=float)
    if not exterior_mask(M, x[None, :], margin=0.0)[0]:
        raise PointNotExterior(f"source {x.tolist()} is not exterior to {M.name}")
    return x


def contact_curve(M: ImplicitOvaloid, x, n: int = DEFAULT_SAMPLES) -> ContactCurve:
    if n < 16:
        raise ValueError("need at least 16 samples")
    x = _require_exterior(M, x)
    pts, tans = contact_curves(M, x[None, :], n)
    return ContactCurve(x, pts[0], tans[0])


class Spread(NamedTuple):
    min: float
    max: float
    spread: float


def tangent_length_spread(M: ImplicitOvaloid, x, n: int = DEFAULT_SAMPLES) -> Spread:
    """Shortest and longest tangent segment from ``x`` over its contact curve."""
    L = contact_curve(M, x, n).lengths()
    return Spread(float(L.min()), float(L.max()), float(L.max() - L.min()))


def _spreads_chunk(args):
    M, X, n = args
    pts, _ = contact_curves(M, X, n)
    L = np.linalg.norm(pts - X[:, None, :], axis=-1)
    return L.max(axis=1) - L.min(axis=1)


def batch_spreads(M: ImplicitOvaloid, X: np.ndarray, n: int = DEFAULT_SAMPLES,
                  chunk: int = 256, workers: int = 1) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    jobs = [(M, X[i:i + chunk], n) for i in range(0, len(X), chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_spreads_chunk, jobs))
    else:
        parts = [_spreads_chunk(j) for j in jobs]
    return np.concatenate(parts) if parts else np.empty(0)


# -- equitangent locus ---------------------------------------------------------------

def make_grid(nx: int, ny: int, nz: int, lo: float, hi: float) -> np.ndarray:
    """Grid points in x-major order (z varies fastest)."""
    axes = [np.linspace(lo, hi, k) for k in (nx, ny, nz)]
    g = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([a.ravel() for a in g])


@dataclass
class LocusScan:
    """Outcome of :func:`sample_equitangent_locus`.

    ``spreads`` is NaN at skipped (interior or on-surface) grid points.
    """

    surface: str
    grid: np.ndarray
    spreads: np.ndarray
    tol: float

    @property
    def exterior(self) -> np.ndarray:
        return ~np.isnan(self.spreads)

    @property
    def n_skipped(self) -> int:
        return int(np.count_nonzero(~self.exterior))

    @property
    def locus_mask(self) -> np.ndarray:
        return self.exterior & (np.nan_to_num(self.spreads, nan=np.inf) < self.tol)

    @property
    def points(self) -> np.ndarray:
        return self.grid[self.locus_mask]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,y,z,spread\n")
        for p, s in zip(self.grid[self.locus_mask], self.spreads[self.locus_mask]):
            buf.write(",".join(format(float(v), ".17g") for v in (*p, s)) + "\n")
        return buf.getvalue()


def sample_equitangent_locus(M: ImplicitOvaloid, grid: np.ndarray, tol: float,
                             n: int = DEFAULT_SAMPLES, workers: int = 1) -> LocusScan:
    """Spread of tangent lengths at every exterior grid point; the locus is spread < tol."""
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    spreads = np.full(len(grid), np.nan)
    ext = exterior_mask(M, grid)
    spreads[ext] = batch_spreads(M, grid[ext], n, workers=workers)
    return LocusScan(M.name, grid, spreads, tol)


def find_lines(points: np.ndarray, tol: float = 1e-6, min_points: int = 3) -> list[np.ndarray]:
    """Greedily extract lines carrying at least ``min_points`` of the points.

    Returns the inlier sets, largest first.
    """
    remaining = np.asarray(points, dtype=float).reshape(-1, 3)
    lines = []
    while len(remaining) >= min_points:
        best = None
        for i in range(len(remaining)):
            for j in range(i + 1, len(remaining)):
                d = remaining[j] - remaining[i]
                d = d / np.linalg.norm(d)
                off = remaining - remaining[i]
                dist = np.linalg.norm(off - np.outer(off @ d, d), axis=1)
                inl = dist < tol
                if best is None or inl.sum() > best.sum():
                    best = inl
        if best is None or best.sum() < min_points:
            break
        lines.append(remaining[best])
        remaining = remaining[~best]
    return lines


@dataclass(frozen=True)
class PlaneWitness:
    axis: int
    value: float
    point: np.ndarray
    spread: float


def certify_no_plane(scan: LocusScan, threshold: float = 1e-3) -> tuple[bool, list[PlaneWitness]]:
    """Exhibit, in every grid plane, an exterior point whose spread exceeds ``threshold``.

    Also fails if the locus points are not collinear, since then a plane
    through them cannot be excluded by the grid planes alone.
    """
    witnesses = []
    certified = True
    ext = scan.exterior
    for axis in range(3):
        for value in np.unique(scan.grid[:, axis]):
            sel = ext & (scan.grid[:, axis] == value)
            if not sel.any():
                continue
            idx = np.flatnonzero(sel)
            k = idx[np.argmax(scan.spreads[idx])]
            witnesses.append(PlaneWitness(axis, float(value), scan.grid[k], float(scan.spreads[k])))
            certified &= bool(scan.spreads[k] > threshold)
    pts = scan.points
    if len(pts) >= 3:
        centered = pts - pts.mean(axis=0)
        sv = np.linalg.svd(centered, compute_uv=False)
        if sv[1] > 1e-6:
            certified = False
    return certified, witnesses


# -- curvature --------------------------------------------------------------------------

class CurvatureData(NamedTuple):
    k1: float
    k2: float
    e1: np.ndarray
    e2: np.ndarray


def _tangent_basis(nu: np.ndarray):
    helper = np.eye(3)[np.argmin(np.abs(nu), axis=-1)]
    t1 = np.cross(nu, helper)
    t1 /= np.linalg.norm(t1, axis=-1, keepdims=True)
    return t1, np.cross(nu, t1)


def _shape_matrix(M, P, t1=None):
    G = M.grad(P)
    gn = np.linalg.norm(G, axis=-1)
    nu = G / gn[..., None]
    if t1 is None:
        t1, t2 = _tangent_basis(nu)
    else:
        t1 = t1 - np.sum(t1 * nu, axis=-1, keepdims=True) * nu
        t1 = t1 / np.linalg.norm(t1, axis=-1, keepdims=True)
        t2 = np.cross(nu, t1)
    H = M.hess(P)
    Ht1 = np.einsum("...ij,...j->...i", H, t1)
    Ht2 = np.einsum("...ij,...j->...i", H, t2)
    s11 = np.sum(t1 * Ht1, axis=-1) / gn
    s12 = np.sum(t1 * Ht2, axis=-1) / gn
    s22 = np.sum(t2 * Ht2, axis=-1) / gn
    return s11, s12, s22, t1, t2


def _curvature_batch(M, P):
    s11, s12, s22, t1, t2 = _shape_matrix(M, P)
    S = np.stack([np.stack([s11, s12], -1), np.stack([s12, s22], -1)], -2)
    w, v = np.linalg.eigh(S)
    k2, k1 = w[..., 0], w[..., 1]
    e1 = v[..., 0, 1, None] * t1 + v[..., 1, 1, None] * t2
    e2 = v[..., 0, 0, None] * t1 + v[..., 1, 0, None] * t2
    return k1, k2, e1, e2


def _require_on_surface(M, p):
    p = np.asarray(p, dtype=float)
    if abs(float(M.F(p))) >= SURFACE_TOL:
        raise NotOnSurface(f"|F(p)| = {abs(float(M.F(p))):.3g}")
    return p


def principal_curvatures(M: ImplicitOvaloid, p) -> CurvatureData:
    """Principal curvatures (k1 >= k2) and directions from the shape operator."""
    p = _require_on_surface(M, p)
    k1, k2, e1, e2 = _curvature_batch(M, p[None, :])
    return CurvatureData(float(k1[0]), float(k2[0]), e1[0], e2[0])


def is_umbilic(M: ImplicitOvaloid, p, tol: float = 1e-8) -> bool:
    c = principal_curvatures(M, p)
    return abs(c.k1 - c.k2) < tol * (1.0 + abs(c.k1))


@dataclass
class UmbilicScan:
    all_umbilic: bool
    points: np.ndarray
    n_samples: int


def _refine_umbilic(M, p0):
    c = M.interior_point
    u0 = p0 - c
    u0 = u0 / np.linalg.norm(u0)
    b1, b2 = _tangent_basis(u0[None, :])
    b1, b2 = b1[0], b2[0]
    frame = b1[None, :]

    def residual(ab):
        p = surface_points(M, (u0 + ab[0] * b1 + ab[1] * b2)[None, :])
        s11, s12, s22, _, _ = _shape_matrix(M, p, frame)
        return np.array([s11[0] - s22[0], 2.0 * s12[0]])

    sol = least_squares(residual, np.zeros(2), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return surface_points(M, (u0 + sol.x[0] * b1 + sol.x[1] * b2)[None, :])[0]


def umbilic_scan(M: ImplicitOvaloid, n: int = 10_000, tol: float = 1e-6,
                 neighbors: int = 12, merge: float = 1e-3) -> UmbilicScan:
    """Locate umbilic points from an n-point surface sampling.

    Local minima of the normalized anisotropy ``|k1 - k2| / (1 + k1)`` over
    the sample's nearest-neighbour graph are refined by solving for a
    vanishing trace-free shape operator, then merged into clusters.
    """
    P = surface_points(M, fibonacci_sphere(n))
    k1, k2, _, _ = _curvature_batch(M, P)
    aniso = np.abs(k1 - k2) / (1.0 + np.abs(k1))
    if np.all(aniso < tol):
        return UmbilicScan(True, P, n)
    _, nbr = cKDTree(P).query(P, k=neighbors + 1)
    is_min = np.all(aniso[:, None] <= aniso[nbr[:, 1:]], axis=1)
    found: list[np.ndarray] = []
    for i in np.flatnonzero(is_min):
        q = _refine_umbilic(M, P[i])
        if abs(float(M.F(q))) >= SURFACE_TOL or not is_umbilic(M, q, tol):
            continue
        if all(np.linalg.norm(q - f) > merge for f in found):
            found.append(q)
    found.sort(key=lambda q: tuple(np.round(q, 6)))
    return UmbilicScan(False, np.array(found).reshape(-1, 3), n)


# -- the tangent-cone argument ------------------------------------------------------

def _equitangent_curve(M, x, n, spread_tol=1e-6):
    x = _require_exterior(M, x)
    cc = contact_curve(M, x, n)
    L = cc.lengths()
    if L.max() - L.min() >= spread_tol:
        raise NotEquitangentSource(f"tangent lengths from {x.tolist()} spread by {L.max() - L.min():.3g}")
    return cc


def joachimsthal_check(M: ImplicitOvaloid, x, n: int = DEFAULT_SAMPLES) -> float:
    """Largest angle between the contact curve and the nearest principal direction.

    At contact points where ``|k1 - k2| < 1e-7`` every direction is
    principal and the misalignment is taken as zero.
    """
    cc = _equitangent_curve(M, x, n)
    k1, k2, e1, e2 = _curvature_batch(M, cc.points)
    a1 = np.abs(np.sum(cc.tangents * e1, axis=-1))
    a2 = np.abs(np.sum(cc.tangents * e2, axis=-1))
    mis = np.minimum(np.arctan2(a2, a1), np.arctan2(a1, a2))
    mis = np.where(np.abs(k1 - k2) < UMBILIC_DEGENERACY, 0.0, mis)
    return float(mis.max())


def sphere_s_of_x_residual(M: ImplicitOvaloid, x, n: int = DEFAULT_SAMPLES) -> float:
    """Orthogonality of M and the sphere about ``x`` along the contact curve.

    The sphere's normal at ``p`` is ``(p - x) / |p - x|``; the residual is
    the largest |cos| of the angle between it and the surface normal.
    """
    cc = _equitangent_curve(M, x, n)
    G = M.grad(cc.points)
    nu = G / np.linalg.norm(G, axis=-1, keepdims=True)
    d = cc.points - cc.source
    return float(np.max(np.abs(np.sum(d * nu, axis=-1)) / np.linalg.norm(d, axis=-1)))
