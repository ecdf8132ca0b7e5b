"""Closed-form bounds for flat spheres with a positive curvature gap, and
the end-to-end harness that verifies them on a concrete surface.

For n cone points and gap delta > 0:

  * saddle connections with at most k self-intersections number at most
    (3n-6) * 2^s with s = (20 n (n-1) sqrt(k) + 20 n) / delta, reported in
    log2 since the value overflows any float for realistic parameters;
  * simple saddle connections number at most
    (5n/delta + 3n-7)^(3n-6) / (3n-7)! + 3n-6;
  * on a unit-area surface the length of a trajectory with at most k
    self-intersections is bounded by
    (40 n (n-1) sqrt(k) + 40 n) / (delta sqrt(pi))
      + (20 n (n-1) sqrt(k) + 20 n) / (delta^(3/2) sqrt(2 pi)),
    improving to 10n/(delta sqrt(pi)) + 5n/(delta^(3/2) sqrt(2 pi)) for
    simple ones;
  * Delaunay edges satisfy L^2 < 4/pi + 1/(2 pi delta), the diameter is at
    most (n+1) (2/sqrt(pi) + 1/sqrt(2 pi delta));
  * simple trajectories have combinatorial length at most 5n/delta and at
    most 5/(2 delta) passes through any Delaunay triangle;
  * monogon interior angles stay at or below pi - 2 pi delta;
  * a trajectory with k transverse self-crossings has combinatorial length
    at most 4 l (n-1) sqrt(k) + 4 l, where l bounds simple combinatorial
    lengths.

The harness checks satisfaction only, never tightness: the bounds are far
from sharp and a violation on a valid surface is a defect in this package.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from . import delaunay as _delaunay
from . import geodesic as _geodesic
from . import normalcoords as _normalcoords
from .curvature import curvature_gap
from .surface import ConeSurface, cone_data, normalize_area

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class BoundsReport:
    """All bounds evaluated for one (n, delta, k), overflow safe."""

    n: int
    delta: float
    k: int
    s_bound: float
    count_bound_log2: float
    simple_count_bound: float
    simple_count_bound_log2: float
    length_bound: float
    simple_length_bound: float
    diameter_bound: float
    delaunay_l2_bound: float
    comb_length_bound: float
    chords_bound: float
    monogon_angle_bound: float
    si_comb_bound: float

    def lines(self):
        out = []
        for name in (
            "n", "delta", "k", "s_bound", "count_bound_log2",
            "simple_count_bound", "simple_count_bound_log2", "length_bound",
            "simple_length_bound", "diameter_bound", "delaunay_l2_bound",
            "comb_length_bound", "chords_bound", "monogon_angle_bound",
            "si_comb_bound",
        ):
            value = getattr(self, name)
            if isinstance(value, int):
                out.append(f"{name}={value}")
            else:
                out.append(f"{name}={value:.12g}")
        return out

    def __str__(self):
        return "\n".join(self.lines())


def s_bound(n: int, delta: float, k: int) -> float:
    return (20.0 * n * (n - 1) * math.sqrt(k) + 20.0 * n) / delta


def length_bound(n: int, delta: float, k: int) -> float:
    a = 40.0 * n * (n - 1) * math.sqrt(k) + 40.0 * n
    b = 20.0 * n * (n - 1) * math.sqrt(k) + 20.0 * n
    return a / (delta * math.sqrt(math.pi)) + b / (
        delta ** 1.5 * math.sqrt(2.0 * math.pi)
    )


def simple_length_bound(n: int, delta: float) -> float:
    return 10.0 * n / (delta * math.sqrt(math.pi)) + 5.0 * n / (
        delta ** 1.5 * math.sqrt(2.0 * math.pi)
    )


def simple_count_bound_log2(n: int, delta: float) -> float:
    base = 5.0 * n / delta + (3 * n - 7)
    term1 = (3 * n - 6) * math.log2(base) - math.lgamma(3 * n - 6) / _LOG2
    term2 = math.log2(3 * n - 6)
    hi = max(term1, term2)
    return hi + math.log2(2.0 ** (term1 - hi) + 2.0 ** (term2 - hi))


def si_comb_bound(l: float, n: int, k: int) -> float:
    return 4.0 * l * (n - 1) * math.sqrt(k) + 4.0 * l


def diameter_bound(n: int, delta: float) -> float:
    return (n + 1) * (
        2.0 / math.sqrt(math.pi) + 1.0 / math.sqrt(2.0 * math.pi * delta)
    )


def compute_bounds(n: int, delta: float, k: int = 0) -> BoundsReport:
    """Evaluate every bound by direct substitution."""
    if n < 3:
        raise ValueError(f"need n >= 3 cone points, got {n}")
    if not 0.0 < delta <= 1.0 / 3.0 + 1e-12:
        raise ValueError(f"curvature gap must lie in (0, 1/3], got {delta}")
    if k < 0:
        raise ValueError("self-intersection budget must be nonnegative")
    s = s_bound(n, delta, k)
    sc_log2 = simple_count_bound_log2(n, delta)
    comb = 5.0 * n / delta
    return BoundsReport(
        n=n,
        delta=delta,
        k=k,
        s_bound=s,
        count_bound_log2=math.log2(3 * n - 6) + s,
        simple_count_bound=2.0 ** sc_log2 if sc_log2 < 1023 else math.inf,
        simple_count_bound_log2=sc_log2,
        length_bound=length_bound(n, delta, k),
        simple_length_bound=simple_length_bound(n, delta),
        diameter_bound=diameter_bound(n, delta),
        delaunay_l2_bound=4.0 / math.pi + 1.0 / (2.0 * math.pi * delta),
        comb_length_bound=comb,
        chords_bound=5.0 / (2.0 * delta),
        monogon_angle_bound=math.pi - 2.0 * math.pi * delta,
        si_comb_bound=si_comb_bound(comb, n, k),
    )


# -- verification harness -----------------------------------------------------


class ZeroGapError(ValueError):
    """The surface has curvature gap 0; the bounds are vacuous and the
    surface may contain flat cylinders, so the harness refuses to run."""


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""
    flagged: bool = False  # true when a budget truncation weakened the check
    witnesses: tuple = ()


@dataclass(frozen=True)
class VerificationReport:
    n: int
    delta: float
    checks: tuple
    truncated: bool
    nodes: int
    cutoff: float
    connections: int

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self):
        out = [
            f"n={self.n}",
            f"delta={self.delta:.12g}",
            f"cutoff={self.cutoff:.12g}",
            f"connections={self.connections}",
            f"nodes={self.nodes}",
            f"truncated={str(self.truncated).lower()}",
        ]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            flag = " (truncated)" if c.flagged else ""
            detail = f" {c.detail}" if c.detail else ""
            out.append(f"check {c.name}: {status}{flag}{detail}")
        return out

    def __str__(self):
        return "\n".join(self.lines())


def verify_surface(
    s: ConeSurface,
    max_nodes: int = 2_000_000,
    max_seconds: float | None = None,
    max_length: float | None = None,
    workers: int = 1,
) -> VerificationReport:
    """Run every bound check against measured data on one surface.

    Pipeline: normalize the area, compute the gap, flip to Delaunay, check
    the edge-length bound, enumerate saddle connections up to the simple
    length bound (or the node/time budget, flagged as truncation), then
    check per-connection combinatorial and metric bounds, normal
    coordinate injectivity, monogon angles and the skeleton diameter.
    Budget exhaustion flags the affected checks instead of failing them.
    """
    s.require_valid()
    cones = cone_data(s)
    n = len(cones)
    delta = curvature_gap([p.curvature for p in cones])
    if delta < 1e-12:
        raise ZeroGapError(
            "curvature gap is 0: a subset of cone curvatures sums to 1, the "
            "bounds are vacuous (the surface may contain flat cylinders)"
        )
    report = compute_bounds(n, delta, 0)
    checks = []

    unit = normalize_area(s)
    flat, flip_report = _delaunay.delaunayize(unit)
    checks.append(
        CheckOutcome(
            "delaunayize-terminates",
            flip_report.flips <= flip_report.cap,
            f"flips={flip_report.flips} cap={flip_report.cap}",
        )
    )
    all_local = all(
        _delaunay.is_locally_delaunay(flat, slot) for slot, _ in flat.edges
    )
    checks.append(CheckOutcome("locally-delaunay", all_local))

    edge_report = _delaunay.check_edge_length_bound(flat, delta)
    checks.append(
        CheckOutcome(
            "delaunay-edge-length",
            edge_report.passed,
            f"threshold={edge_report.threshold:.6g}",
            witnesses=edge_report.violations,
        )
    )

    cutoff = report.simple_length_bound
    if max_length is not None:
        cutoff = min(cutoff, max_length)
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    result = _geodesic.enumerate_saddle_connections(
        flat, cutoff, node_budget=max_nodes, workers=workers, deadline=deadline
    )
    # the simple-count check is exhaustive only when the enumeration ran to
    # the full theorem cutoff without exhausting its budget
    truncated = not result.complete or cutoff < report.simple_length_bound

    simple_conns = []
    self_crossing = []
    for conn in result:
        traj = conn.trajectory
        k = _geodesic.count_self_intersections(traj)
        if k == 0:
            simple_conns.append(conn)
        else:
            self_crossing.append((conn, traj, k))

    comb_bad = []
    chords_bad = []
    for conn in simple_conns:
        comb = _geodesic.combinatorial_length(conn.trajectory, flat)
        if comb > report.comb_length_bound + 1e-9:
            comb_bad.append((conn, comb))
        counts = _geodesic.per_triangle_crossings(conn.trajectory)
        worst = max(counts.values(), default=0)
        if worst > report.chords_bound + 1e-9:
            chords_bad.append((conn, worst))
    checks.append(
        CheckOutcome(
            "simple-combinatorial-length",
            not comb_bad,
            f"bound={report.comb_length_bound:.6g} simple={len(simple_conns)}",
            witnesses=tuple(comb_bad[:5]),
        )
    )
    checks.append(
        CheckOutcome(
            "simple-per-triangle-chords",
            not chords_bad,
            f"bound={report.chords_bound:.6g}",
            witnesses=tuple(chords_bad[:5]),
        )
    )

    coords = {}
    coord_dupes = []
    for conn in simple_conns:
        if conn.kind == "edge":
            continue
        coord = _normalcoords.encode_normal(conn, flat, check_simple=False)
        key = coord.key()
        if key in coords:
            coord_dupes.append((coords[key], conn))
        else:
            coords[key] = conn
    checks.append(
        CheckOutcome(
            "normal-coordinates-distinct",
            not coord_dupes,
            f"encoded={len(coords)}",
            witnesses=tuple(coord_dupes[:5]),
        )
    )

    checks.append(
        CheckOutcome(
            "simple-count",
            len(simple_conns) <= report.simple_count_bound,
            f"count={len(simple_conns)} bound={report.simple_count_bound:.6g}",
            flagged=truncated,
        )
    )

    si_bad = []
    len_bad = []
    for conn, traj, k in self_crossing:
        comb = _geodesic.combinatorial_length(traj, flat)
        limit = si_comb_bound(report.comb_length_bound, n, k)
        if comb > limit + 1e-9:
            si_bad.append((conn, k, comb, limit))
        lb = length_bound(n, delta, k)
        if conn.length > lb + 1e-9:
            len_bad.append((conn, k, conn.length, lb))
    checks.append(
        CheckOutcome(
            "self-intersecting-combinatorial",
            not si_bad,
            f"self_crossing={len(self_crossing)}",
            witnesses=tuple(si_bad[:5]),
        )
    )
    checks.append(
        CheckOutcome(
            "self-intersecting-length",
            not len_bad,
            witnesses=tuple(len_bad[:5]),
        )
    )

    monogon_bad = []
    monogons = 0
    for conn, traj, k in self_crossing:
        for angle, _ in _geodesic.extract_monogons(traj):
            monogons += 1
            if angle > report.monogon_angle_bound + 1e-9:
                monogon_bad.append((conn, angle))
    checks.append(
        CheckOutcome(
            "monogon-angle",
            not monogon_bad,
            f"monogons={monogons} bound={report.monogon_angle_bound:.6g}",
            witnesses=tuple(monogon_bad[:5]),
        )
    )

    diam = _delaunay.cone_graph_diameter(flat)
    checks.append(
        CheckOutcome(
            "cone-graph-diameter",
            diam <= report.diameter_bound + 1e-9,
            f"diameter={diam:.6g} bound={report.diameter_bound:.6g}",
        )
    )

    return VerificationReport(
        n=n,
        delta=delta,
        checks=tuple(checks),
        truncated=truncated,
        nodes=result.nodes,
        cutoff=cutoff,
        connections=len(result),
    )
