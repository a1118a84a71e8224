"""Command-line entry point: ``equitangent construct|verify|scan3d|render``.

Exit status is 0 when a verification passes, 1 when it fails and 2 for
usage errors, malformed input or violated preconditions (the error class
name is printed on stderr).  JSON and CSV output formats every float with
17 significant digits so that runs are byte-for-byte reproducible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import constructions, ellipse_optics, hyperbolic, ovaloid3d
from .curves2d import (ArcSplineCurve, Curve, SupportCurve, curve_from_dict, curve_to_dict,
                       equitangent_residual, euclidean_width)
from .errors import GeometryError, InvalidCurve, NotInUpperHalfPlane
from .geom2d import TWO_PI, Arc2, Circle2, Line2, Point2

DEFAULT_TOL = {
    "equitangent-line": 1e-8,
    "constant-width": 1e-9,
    "hyperbolic-width": 1e-6,
    "ellipse-optics": ellipse_optics.ANGLE_TOL,
}


class UsageError(Exception):
    pass


# -- deterministic serialization ---------------------------------------------------

def _fmt(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 2) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    return json.dumps(str(obj))


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _xy(p: Point2) -> list[float]:
    return [p.x, p.y]


def _parse_floats(text: str, count: int | None, name: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated numbers") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"--{name} expects {count} numbers")
    return vals


def _point(v) -> Point2:
    return Point2(float(v[0]), float(v[1]))


def _circle(d) -> Circle2:
    return Circle2(Point2(float(d["cx"]), float(d["cy"])), float(d["r"]))


# -- construct -------------------------------------------------------------------------

def _param(recipe: dict, *names, default=None):
    for n in names:
        if n in recipe:
            return recipe[n]
    if default is None:
        raise KeyError(names[0])
    return default


def _figure1(recipe: dict) -> dict:
    if any(k in recipe for k in ("c1", "c2", "x", "y")):
        fig = constructions.build_figure1(
            _circle(recipe["c1"]), _circle(recipe["c2"]), _point(recipe["x"]), _point(recipe["y"]),
            snap_tol=float(recipe.get("snap", constructions.EPS_GEOM)))
    else:
        fig = constructions.build_figure1(
            constructions.FIGURE1_C1, constructions.FIGURE1_C2, constructions.FIGURE1_X,
            constructions.FIGURE1_Y, snap_tol=float(recipe.get("snap", constructions.FIGURE1_SNAP)))
    out = curve_to_dict(fig.curve)
    out["annotations"] = {
        "axis": {"point": _xy(fig.axis.point), "direction": _xy(fig.axis.direction)},
        **{k: _xy(getattr(fig, k)) for k in ("x", "y", "a", "b", "c", "d")},
        "segments": [["x", "a"], ["x", "b"], ["y", "c"], ["y", "d"]],
    }
    return out


def _pair(recipe: dict, with_edges: bool) -> dict:
    n = int(_param(recipe, "n"))
    lam = float(_param(recipe, "lambda", "lam"))
    eps = float(_param(recipe, "epsilon", "eps"))
    curve, verts = constructions.build_rounded_reuleaux(n, lam, eps)
    out = {
        "gamma": curve_to_dict(curve),
        "Gamma": [_xy(p) for p in constructions.build_radical_polygon(n, lam, eps)],
        "vertices": [_xy(p) for p in verts],
    }
    if with_edges:
        out["edges"] = [
            {"small": {"cx": s.center.x, "cy": s.center.y, "r": s.radius},
             "large": {"cx": b.center.x, "cy": b.center.y, "r": b.radius}}
            for s, b in constructions.radical_polygon_edges(n, lam, eps)]
    return out


def _hyperbolic(recipe: dict) -> dict:
    c = recipe.get("center", [0.0, 1.0])
    center = hyperbolic.HalfPlanePoint(float(c[0]), float(c[1]))
    if "radius" in recipe:
        return curve_to_dict(hyperbolic.hyperbolic_disk(center, float(recipe["radius"])))
    curve, _ = hyperbolic.build_hyperbolic_reuleaux(
        int(_param(recipe, "n")), float(_param(recipe, "lambda", "lam")),
        float(_param(recipe, "epsilon", "eps")), center)
    return curve_to_dict(curve)


def _simple(recipe: dict) -> dict:
    center = Point2(float(recipe.get("cx", 0.0)), float(recipe.get("cy", 0.0)))
    if recipe["construction"] == "circle":
        return curve_to_dict(ArcSplineCurve([Arc2(Circle2(center, float(recipe["r"])), 0.0, TWO_PI)]))
    curve = SupportCurve.ellipse(float(recipe["a"]), float(recipe["b"]), center,
                                 float(recipe.get("rotation", 0.0)))
    return curve_to_dict(curve, int(recipe.get("samples", 257)))


RECIPES = {
    "figure1": _figure1,
    "reuleaux": lambda r: _pair(r, False),
    "radical_polygon": lambda r: _pair(r, True),
    "hyperbolic": _hyperbolic,
    "circle": _simple,
    "ellipse": _simple,
}


def cmd_construct(args) -> int:
    recipe = json.loads(Path(args.recipe).read_text())
    if not isinstance(recipe, dict) or recipe.get("construction") not in RECIPES:
        raise UsageError(f"recipe must name a construction from {sorted(RECIPES)}")
    _write(dumps(RECIPES[recipe["construction"]](recipe)) + "\n", args.out)
    return 0


# -- verify ----------------------------------------------------------------------------

def load_curve_file(path: str) -> tuple[Curve, dict]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise InvalidCurve("curve file must hold a JSON object")
    body = data.get("gamma", data)
    return curve_from_dict(body), data


def _line_from_args(args, data: dict) -> Line2 | None:
    if args.line:
        px, py, dx, dy = _parse_floats(args.line, 4, "line")
        return Line2(Point2(px, py), Point2(dx, dy))
    ann = data.get("annotations", {})
    if "axis" in ann:
        return Line2(_point(ann["axis"]["point"]), _point(ann["axis"]["direction"]))
    return None


def _diameter(curve: Curve) -> float:
    return ellipse_optics.curve_diameter(curve)


def _exterior_line_points(curve: Curve, line: Line2, count: int) -> list[Point2]:
    """``count`` points of ``line`` outside the curve, within a few diameters of it."""
    span = 3.0 * _diameter(curve)
    center = line.parameter_of(_centroid(curve))
    ts = np.linspace(center - span, center + span, 8 * count + 1)
    ext = [line.at(float(t)) for t in ts if curve.signed_distance(line.at(float(t))) > 1e-6]
    if not ext:
        raise UsageError("the line has no exterior points near the curve")
    idx = np.linspace(0, len(ext) - 1, min(count, len(ext))).round().astype(int)
    return [ext[i] for i in idx]


def _centroid(curve: Curve) -> Point2:
    pts = curve.sample_points(360)
    return Point2(float(pts[:, 0].mean()), float(pts[:, 1].mean()))


def _check_equitangent_line(curve, data, args, tol):
    line = _line_from_args(args, data)
    if line is not None:
        locus = _exterior_line_points(curve, line, args.points or 50)
        source = "line"
    elif "Gamma" in data:
        verts = [_point(v) for v in data["Gamma"]]
        locus = []
        per_edge = args.points or 20
        for i, p in enumerate(verts):
            q = verts[(i + 1) % len(verts)]
            locus += [p + (q - p) * (k / per_edge) for k in range(per_edge)]
        source = "Gamma"
    else:
        raise UsageError("equitangent-line needs --line or a file with an axis or Gamma")
    res, worst = equitangent_residual(curve, locus)
    return {"locus": source, "n_points": len(locus), "residual": res,
            "worst_point": _xy(worst)}, res < tol


def _check_constant_width(curve, data, args, tol):
    theta = np.linspace(0.0, math.pi, 720, endpoint=False)
    w = np.asarray(euclidean_width(curve, theta), dtype=float)
    spread = float(w.max() - w.min())
    return {"n_directions": 720, "min_width": float(w.min()), "max_width": float(w.max()),
            "spread": spread}, spread < tol


def _check_hyperbolic_width(curve, data, args, tol):
    pts = curve.sample_points(720)
    if pts[:, 1].min() <= 0.0:
        raise NotInUpperHalfPlane("curve must lie in the upper half-plane")
    if args.xrange:
        lo, hi, k = _parse_floats(args.xrange, 3, "xrange")
    else:
        w = pts[:, 0].max() - pts[:, 0].min()
        lo, hi, k = pts[:, 0].min() - 2.0 * w, pts[:, 0].max() + 2.0 * w, 41
    xs = np.linspace(lo, hi, int(k))
    res = hyperbolic.equitangent_from_boundary_residual(curve, xs)
    report = {"n_samples": len(xs), "equitangent_residual": res, "width_spread": None}
    if res >= tol:
        return report, False
    rows = hyperbolic.hyperbolic_width_profile(curve, xs, tol)
    widths = [r.width for r in rows]
    report["width_spread"] = max(widths) - min(widths)
    report["width"] = sum(widths) / len(widths)
    return report, report["width_spread"] < tol


def _check_ellipse_optics(curve, data, args, tol):
    if not (args.P and args.Q):
        raise UsageError("ellipse-optics needs --P and --Q")
    P = Point2(*_parse_floats(args.P, 2, "P"))
    Q = Point2(*_parse_floats(args.Q, 2, "Q"))
    if args.line:
        ell = _line_from_args(args, {})
    else:
        theta = float(args.param if args.param is not None else math.pi / 2)
        ell = Line2(curve.point_at(theta), curve.tangent_at(theta))
    rep = ellipse_optics.converse_check(curve, P, Q, ell, n_samples=args.points or 64, angle_tol=tol)
    report = rep.to_dict()
    report["shape"] = report.pop("verdict")
    return report, rep.verdict == "ellipse"


CHECKS = {
    "equitangent-line": _check_equitangent_line,
    "constant-width": _check_constant_width,
    "hyperbolic-width": _check_hyperbolic_width,
    "ellipse-optics": _check_ellipse_optics,
}


def cmd_verify(args) -> int:
    if args.check not in CHECKS:
        raise UsageError(f"unknown check {args.check!r}; choose from {sorted(CHECKS)}")
    curve, data = load_curve_file(args.curve)
    tol = args.tol if args.tol is not None else DEFAULT_TOL[args.check]
    report, ok = CHECKS[args.check](curve, data, args, tol)
    report = {"check": args.check, "tol": tol, **report, "verdict": "pass" if ok else "fail"}
    _write(dumps(report) + "\n", args.out)
    return 0 if ok else 1


# -- scan3d ----------------------------------------------------------------------------

def cmd_scan3d(args) -> int:
    params = _parse_floats(args.params, None, "params") if args.params else []
    surface = ovaloid3d.corpus_surface(args.surface, params)
    nx, ny, nz, lo, hi = _parse_floats(args.grid, 5, "grid")
    grid = ovaloid3d.make_grid(int(nx), int(ny), int(nz), lo, hi)
    tol = args.tol if args.tol is not None else 1e-6
    scan = ovaloid3d.sample_equitangent_locus(surface, grid, tol, n=args.samples,
                                              workers=args.workers)
    _write(scan.to_csv(), args.out)
    if args.report:
        certified, witnesses = ovaloid3d.certify_no_plane(scan)
        lines = ovaloid3d.find_lines(scan.points) if len(scan.points) <= 200 else []
        summary = {
            "surface": surface.name,
            "n_grid": len(grid),
            "n_skipped": scan.n_skipped,
            "n_locus": int(len(scan.points)),
            "max_spread": float(np.nanmax(scan.spreads)) if scan.exterior.any() else None,
            "no_plane_certified": certified,
            "n_plane_witnesses": len(witnesses),
            "n_lines": len(lines),
        }
        Path(args.report).write_text(dumps(summary) + "\n")
    return 0


# -- render ----------------------------------------------------------------------------

def _svg_arc_path(arc: Arc2) -> str:
    c, r = arc.circle.center, arc.circle.radius
    start, sweep = arc.start_angle, arc.sweep
    # A single SVG arc cannot describe a full circle.
    pieces = 2 if sweep >= TWO_PI - 1e-9 else 1
    s = arc.circle.point_at(start)
    out = [f"M {_fmt(s.x)} {_fmt(s.y)}"]
    for k in range(pieces):
        a1 = start + sweep * (k + 1) / pieces
        e = arc.circle.point_at(a1)
        large = 1 if sweep / pieces > math.pi else 0
        out.append(f"A {_fmt(r)} {_fmt(r)} 0 {large} 1 {_fmt(e.x)} {_fmt(e.y)}")
    return " ".join(out)


def _curve_svg(curve: Curve, style: str) -> list[str]:
    if isinstance(curve, ArcSplineCurve):
        return [f'<path d="{_svg_arc_path(a)}" {style}/>' for a in curve.arcs if a.circle.radius > 0.0]
    pts = curve.sample_points(720)
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
    return [f'<polygon points="{coords}" {style}/>']


class _Canvas:
    """Collects world-space elements and writes a y-up SVG."""

    def __init__(self):
        self.items: list[str] = []
        self.labels: list[tuple[float, float, str]] = []
        self.xs: list[float] = []
        self.ys: list[float] = []

    def extend(self, pts) -> None:
        for x, y in pts:
            self.xs.append(float(x))
            self.ys.append(float(y))

    def svg(self, default=(-1.0, 1.0, -1.0, 1.0)) -> str:
        if self.xs:
            x0, x1, y0, y1 = min(self.xs), max(self.xs), min(self.ys), max(self.ys)
        else:
            x0, x1, y0, y1 = default
        pad = 0.08 * max(x1 - x0, y1 - y0, 1e-9)
        x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
        width = 800
        height = max(1, int(round(width * (y1 - y0) / (x1 - x0))))
        size = max(x1 - x0, y1 - y0)
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
                f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}">')
        body = [head, '<g transform="scale(1,-1)" fill="none" stroke-linecap="round">']
        body += self.items
        body.append("</g>")
        fs = _fmt(0.025 * size)
        for x, y, text in self.labels:
            body.append(f'<text x="{_fmt(x)}" y="{_fmt(-y)}" font-size="{fs}" '
                        f'font-family="serif">{text}</text>')
        body.append("</svg>")
        return "\n".join(body) + "\n"


STROKE = 'stroke="{color}" stroke-width="{w}" vector-effect="non-scaling-stroke"'


def _style(color: str = "black", w: float = 1.5) -> str:
    return STROKE.format(color=color, w=w)


def _render_curve_file(data: dict) -> str:
    cv = _Canvas()
    curve = curve_from_dict(data.get("gamma", data))
    cv.items += _curve_svg(curve, _style())
    cv.extend(curve.sample_points(360))
    if "Gamma" in data:
        poly = [_point(v) for v in data["Gamma"]]
        coords = " ".join(f"{_fmt(p.x)},{_fmt(p.y)}" for p in poly)
        cv.items.append(f'<polygon points="{coords}" {_style("steelblue")}/>')
        cv.extend((p.x, p.y) for p in poly)
    for v in data.get("vertices", []):
        cv.items.append(f'<circle cx="{_fmt(v[0])}" cy="{_fmt(v[1])}" r="0.01" fill="black"/>')
    ann = data.get("annotations")
    if ann:
        named = {k: _point(v) for k, v in ann.items() if k not in ("axis", "segments")}
        cv.extend((p.x, p.y) for p in named.values())
        if "axis" in ann:
            axis = Line2(_point(ann["axis"]["point"]), _point(ann["axis"]["direction"]))
            ts = [axis.parameter_of(Point2(x, y)) for x, y in zip(cv.xs, cv.ys)]
            pad = 0.1 * (max(ts) - min(ts))
            a, b = axis.at(min(ts) - pad), axis.at(max(ts) + pad)
            cv.items.append(f'<line x1="{_fmt(a.x)}" y1="{_fmt(a.y)}" x2="{_fmt(b.x)}" '
                            f'y2="{_fmt(b.y)}" {_style("gray", 1.0)}/>')
        for s, t in ann.get("segments", []):
            p, q = named[s], named[t]
            cv.items.append(f'<line x1="{_fmt(p.x)}" y1="{_fmt(p.y)}" x2="{_fmt(q.x)}" '
                            f'y2="{_fmt(q.y)}" {_style("firebrick", 1.0)}/>')
        for name, p in named.items():
            cv.items.append(f'<circle cx="{_fmt(p.x)}" cy="{_fmt(p.y)}" r="0.03" fill="black"/>')
            cv.labels.append((p.x + 0.05, p.y + 0.05, name))
    return cv.svg()


def _render_scan(text: str) -> str:
    rows = list(csv.DictReader(io.StringIO(text)))
    if rows and not {"x", "y", "z", "spread"} <= set(rows[0]):
        raise UsageError("scan CSV needs columns x,y,z,spread")
    pts = [(float(r["x"]), float(r["z"])) for r in rows]
    cv = _Canvas()
    ext = max([1.0] + [abs(v) for p in pts for v in p])
    cv.extend([(-ext, -ext), (ext, ext)])
    for a, b in (((-ext, 0.0), (ext, 0.0)), ((0.0, -ext), (0.0, ext))):
        cv.items.append(f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
                        f'y2="{_fmt(b[1])}" {_style("gray", 1.0)}/>')
    cv.labels += [(ext, 0.02 * ext, "x"), (0.02 * ext, ext, "z")]
    for x, z in pts:
        cv.items.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(z)}" r="{_fmt(0.01 * ext)}" fill="firebrick"/>')
    return cv.svg()


def cmd_render(args) -> int:
    text = Path(args.input).read_text()
    if text.lstrip().startswith("{"):
        svg = _render_curve_file(json.loads(text))
    else:
        svg = _render_scan(text)
    _write(svg, args.out)
    return 0


# -- entry point ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equitangent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a curve from a JSON recipe")
    p.add_argument("--recipe", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run a check on a curve file")
    p.add_argument("--curve", required=True)
    p.add_argument("--check", required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--line", help="px,py,dx,dy")
    p.add_argument("--points", type=int,
                   help="locus samples (50 on a line, 20 per polygon edge, 64 for ellipse-optics)")
    p.add_argument("--xrange", help="lo,hi,count of boundary sources for hyperbolic-width")
    p.add_argument("--P", help="x,y")
    p.add_argument("--Q", help="x,y")
    p.add_argument("--param", type=float, help="normal angle of the tangency of ell")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan3d", help="sample the equitangent locus of a corpus surface")
    p.add_argument("--surface", required=True)
    p.add_argument("--params", help="comma-separated surface parameters")
    p.add_argument("--grid", default="11,11,11,-3,3", help="nx,ny,nz,min,max")
    p.add_argument("--tol", type=float)
    p.add_argument("--samples", type=int, default=ovaloid3d.DEFAULT_SAMPLES)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--report", help="write a JSON summary here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan3d)

    p = sub.add_parser("render", help="draw a curve file or scan CSV as SVG")
    p.add_argument("input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GeometryError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"UsageError: {exc}", file=sys.stderr)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(f"MalformedInput: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
