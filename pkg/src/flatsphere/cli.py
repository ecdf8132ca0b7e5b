"""Command line interface.

Exit codes: 0 on success, 1 when a verification or validation check fails,
2 on usage, parse, or I/O errors.  All output is deterministic for fixed
inputs, flags and seed, including under parallel enumeration.
"""

from __future__ import annotations

import argparse
import math
import random
import sys

from . import bounds as _bounds
from . import delaunay as _delaunay
from . import geodesic as _geodesic
from . import normalcoords as _normalcoords
from .annulus import (
    AnnulusSpec,
    annulus_sc_lower_bound,
    classify_trajectory,
    modulus,
)
from .curvature import curvature_gap
from .surface import (
    ConeSurface,
    ParseError,
    cone_data,
    generate_doubled_polygon,
    normalize_area,
    parse_surface,
    random_convex_polygon,
    serialize_surface,
    validate_surface,
)


def _read_surface(path: str) -> ConeSurface:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_surface(text)


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def generate_surface(
    seed: int,
    vertices: int | None = None,
    min_gap: float = 0.01,
    normalize: bool = False,
    max_attempts: int = 1000,
) -> ConeSurface:
    """Seeded random doubled convex polygon with curvature gap > min_gap.

    The seed fully determines the surface: vertices are sampled on the
    unit circle and resampled until the gap constraint holds.
    """
    rng = random.Random(seed)
    m = vertices if vertices is not None else rng.randint(3, 12)
    for _ in range(max_attempts):
        surface = generate_doubled_polygon(random_convex_polygon(m, rng))
        gap = curvature_gap([p.curvature for p in cone_data(surface)])
        if gap > min_gap:
            return normalize_area(surface) if normalize else surface
    raise RuntimeError(
        f"no polygon with gap > {min_gap} found in {max_attempts} attempts"
    )


def saddles_csv(
    surface: ConeSurface,
    max_length: float,
    simple_only: bool = False,
    node_budget: int | None = None,
    workers: int = 1,
) -> tuple[str, bool]:
    """The saddle connection table as CSV text, plus a completeness flag.

    Columns: length, crossings, self_intersections, start_vertex,
    end_vertex, normal_coordinate (semicolon-joined counts; 'edge' for
    connections lying in a triangulation edge, empty for non-simple ones).
    Rows are sorted by length with the crossing sequence as tiebreak.
    """
    result = _geodesic.enumerate_saddle_connections(
        surface, max_length, node_budget=node_budget, workers=workers
    )
    lines = [
        "length,crossings,self_intersections,start_vertex,end_vertex,"
        "normal_coordinate"
    ]
    for conn in result:
        k = _geodesic.count_self_intersections(conn.trajectory)
        if simple_only and k > 0:
            continue
        if conn.kind == "edge":
            coord = "edge"
        elif k == 0:
            coord = str(_normalcoords.encode_normal(conn, surface, check_simple=False))
        else:
            coord = ""
        lines.append(
            f"{conn.length:.12g},{len(conn.crossings)},{k},"
            f"{conn.start_vertex},{conn.end_vertex},{coord}"
        )
    return "\n".join(lines) + "\n", result.complete


def trajectory_svg(traj: _geodesic.Trajectory) -> str:
    """Developed (unfolded) picture: triangle outlines plus the straight
    trajectory, as a standalone SVG document."""
    charts = traj.surface.charts
    polys = []
    pts = []
    for seg in traj.segments:
        tri = charts[seg.triangle]
        polys.append([seg.rot * corner + seg.off for corner in tri])
        pts.append(seg.rot * seg.start + seg.off)
    pts.append(traj.segments[-1].rot * traj.segments[-1].end + traj.segments[-1].off)
    xs = [p.real for poly in polys for p in poly] + [p.real for p in pts]
    ys = [-p.imag for poly in polys for p in poly] + [-p.imag for p in pts]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.6f} {y0:.6f} '
        f'{w:.6f} {h:.6f}">',
    ]
    stroke = 0.004 * max(w, h)
    for poly in polys:
        coords = " ".join(f"{p.real:.6f},{-p.imag:.6f}" for p in poly)
        out.append(
            f'<polygon points="{coords}" fill="none" stroke="#bbbbbb" '
            f'stroke-width="{stroke:.6f}"/>'
        )
    coords = " ".join(f"{p.real:.6f},{-p.imag:.6f}" for p in pts)
    out.append(
        f'<polyline points="{coords}" fill="none" stroke="#cc2222" '
        f'stroke-width="{1.5 * stroke:.6f}"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- subcommands ---------------------------------------------------------------


def _cmd_validate(args) -> int:
    report = validate_surface(_read_surface(args.file), args.tol)
    print(report)
    return 0 if report.passed else 1


def _cmd_info(args) -> int:
    surface = _read_surface(args.file)
    surface.require_valid()
    cones = cone_data(surface)
    gap = curvature_gap([p.curvature for p in cones])
    print(f"n={len(cones)}")
    print("angles=" + ",".join(f"{p.angle:.6f}" for p in cones))
    print("curvatures=" + ",".join(f"{p.curvature:.6f}" for p in cones))
    print(f"gap={gap:.6f}")
    print(f"area={surface.area:.6f}")
    return 0


def _cmd_gap(args) -> int:
    ks = [float(x) for x in args.curvatures.split(",") if x.strip()]
    print(f"gap={curvature_gap(ks):.12g}")
    return 0


def _cmd_annulus(args) -> int:
    spec = AnnulusSpec(args.R, args.Rp, args.theta)
    if spec.R > 0.0:
        print(f"modulus={modulus(spec):.12g}")
    print(f"sc_lower_bound={annulus_sc_lower_bound(spec):.12g}")
    if args.alpha is not None:
        print(classify_trajectory(spec, args.start, args.alpha))
    return 0


def _cmd_delaunay(args) -> int:
    surface = _read_surface(args.file)
    flat, report = _delaunay.delaunayize(surface, tol=args.tol)
    if args.report:
        print(report)
    _write_text(args.out, serialize_surface(flat))
    return 0


def _cmd_trace(args) -> int:
    surface = _read_surface(args.file)
    u, v = (float(x) for x in args.bary.split(","))
    tri = surface.charts[args.triangle]
    point = u * tri[0] + v * tri[1] + (1.0 - u - v) * tri[2]
    traj = _geodesic.trace(
        surface,
        _geodesic.PointAnchor(args.triangle, point),
        args.angle,
        args.max_length,
    )
    print(f"status={traj.status}")
    print(f"length={traj.length:.12g}")
    print(f"crossings={len(traj.crossings)}")
    print(f"self_intersections={_geodesic.count_self_intersections(traj)}")
    if args.svg:
        _write_text(args.svg, trajectory_svg(traj))
    return 0


def _cmd_saddles(args) -> int:
    surface = _read_surface(args.file)
    csv, complete = saddles_csv(
        surface,
        args.max_length,
        simple_only=args.simple_only,
        node_budget=args.budget_nodes,
        workers=args.parallel,
    )
    _write_text(args.out, csv)
    if not complete:
        print("warning: node budget exhausted, list may be incomplete",
              file=sys.stderr)
    return 0


def _cmd_bounds(args) -> int:
    print(_bounds.compute_bounds(args.n, args.delta, args.k))
    return 0


def _cmd_verify(args) -> int:
    surface = _read_surface(args.file)
    try:
        report = _bounds.verify_surface(
            surface,
            max_nodes=args.budget_nodes,
            max_seconds=args.budget_seconds,
            max_length=args.max_length,
            workers=args.parallel,
        )
    except _bounds.ZeroGapError as exc:
        print(f"refused: {exc}")
        return 1
    print(report)
    if report.truncated:
        print("warning: budget exhausted, enumeration truncated", file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_generate(args) -> int:
    surface = generate_surface(
        args.seed, args.vertices, args.min_gap, args.normalize
    )
    _write_text(args.out, serialize_surface(surface))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flatsphere",
        description="Flat spheres with conical singularities: validation, "
        "curvature gap, Delaunay flips, geodesics, saddle connections and "
        "bound verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check all surface invariants")
    p.add_argument("file", help="fsph file, or - for stdin")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("info", help="cone angles, gap, area")
    p.add_argument("file")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser("gap", help="curvature gap of a raw multiset")
    p.add_argument("--curvatures", required=True, help="comma separated")
    p.set_defaults(func=_cmd_gap)

    p = sub.add_parser("annulus", help="flat annulus A(R, R', theta) report")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--Rp", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--start", choices=["inner", "outer"], default="outer")
    p.set_defaults(func=_cmd_annulus)

    p = sub.add_parser("delaunay", help="flip to a Delaunay triangulation")
    p.add_argument("file")
    p.add_argument("--out", default="-")
    p.add_argument("--report", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_delaunay)

    p = sub.add_parser("trace", help="trace a geodesic from an interior point")
    p.add_argument("file")
    p.add_argument("--triangle", type=int, required=True)
    p.add_argument("--bary", required=True, help="u,v barycentric weights")
    p.add_argument("--angle", type=float, required=True)
    p.add_argument("--max-length", type=float, required=True)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_trace)

    p = sub.add_parser("saddles", help="enumerate saddle connections as CSV")
    p.add_argument("file")
    p.add_argument("--max-length", type=float, required=True)
    p.add_argument("--simple-only", action="store_true")
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_saddles)

    p = sub.add_parser("bounds", help="evaluate all closed-form bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("verify", help="verify every bound on a surface")
    p.add_argument("file")
    p.add_argument("--budget-nodes", type=int, default=2_000_000)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--max-length", type=float, default=None)
    p.add_argument("--parallel", type=int, default=1)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("generate", help="seeded random doubled convex polygon")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--vertices", type=int, default=None)
    p.add_argument("--min-gap", type=float, default=0.01)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
