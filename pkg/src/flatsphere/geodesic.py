"""Geodesics on cone surfaces: tracing, self-intersections, enumeration.

A trajectory is traced by straight-line continuation across glued edges,
developing triangle charts into the plane as it goes; a trajectory whose
chain of charts is developed yields a single straight line.  Saddle
connections (geodesics between cone points with none in the interior) are
enumerated exhaustively by a sector search: from every corner of every
triangle, chains of unfolded triangles are explored together with the wedge
of directions that reach them, a wedge being discarded only when the whole
window it must cross provably lies beyond the length cutoff.

Vertex hits are resolved with a tolerance of 1e-9 times the local triangle
size: a traced line passing closer than that to a cone point terminates
there, and the sector search treats directions within the corresponding
angular band of a vertex image as hitting the vertex.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .surface import ConeSurface

HIT_VERTEX = "hit-vertex"
COMPLETED = "completed"
BUDGET_EXHAUSTED = "length-budget-exhausted"

VERTEX_HIT_REL_TOL = 1e-9
_ANGULAR_BAND = 1e-12


@dataclass(frozen=True)
class VertexAnchor:
    triangle: int
    corner: int


@dataclass(frozen=True)
class PointAnchor:
    triangle: int
    point: complex


@dataclass(frozen=True)
class TraceSegment:
    """One straight pass through a triangle, in that triangle's chart.

    (rot, off) develop the chart into the plane of the whole trajectory,
    as z -> rot*z + off.
    """

    triangle: int
    start: complex
    end: complex
    rot: complex
    off: complex

    @property
    def length(self) -> float:
        return abs(self.end - self.start)


@dataclass(frozen=True)
class Trajectory:
    surface: ConeSurface = field(repr=False, compare=False)
    segments: tuple
    crossings: tuple
    start_anchor: object
    end_anchor: object
    length: float
    status: str

    def developed_points(self):
        """Plane images of all segment endpoints; collinear for a geodesic."""
        out = []
        for seg in self.segments:
            out.append(seg.rot * seg.start + seg.off)
            out.append(seg.rot * seg.end + seg.off)
        return out


def trace(surface, anchor, angle, max_length, max_crossings=100000) -> Trajectory:
    """Trace a geodesic from an anchor in the given chart direction.

    The anchor is a VertexAnchor (start at a corner; the direction must
    point strictly into the corner sector) or a PointAnchor (start inside a
    triangle).  Tracing stops at a vertex hit, at max_length, or when the
    crossing cap runs out.
    """
    surface.require_valid()
    if not max_length > 0.0:
        raise ValueError("max_length must be positive")
    charts = surface.charts
    sides = surface.sides
    d = complex(math.cos(angle), math.sin(angle))

    if isinstance(anchor, VertexAnchor):
        t, c = anchor.triangle, anchor.corner
        tri = charts[t]
        p = tri[c]
        ray_r = tri[(c + 1) % 3] - p
        ray_l = tri[(c + 2) % 3] - p
        for ray, far in ((ray_r, (c + 1) % 3), (ray_l, (c + 2) % 3)):
            # along an incident edge: the edge is itself a geodesic ending
            # at the far cone point
            if (
                abs(_cross(ray, d)) <= _ANGULAR_BAND * abs(ray)
                and ray.real * d.real + ray.imag * d.imag > 0.0
            ):
                if max_length >= abs(ray):
                    seg = TraceSegment(t, p, tri[far], 1.0 + 0j, 0j)
                    end = VertexAnchor(t, far)
                    status = HIT_VERTEX
                else:
                    seg = TraceSegment(t, p, p + max_length * d, 1.0 + 0j, 0j)
                    end = PointAnchor(t, seg.end)
                    status = COMPLETED
                return Trajectory(
                    surface, (seg,), (), anchor, end, seg.length, status
                )
        if (
            _cross(ray_r, d) <= _ANGULAR_BAND * abs(ray_r)
            or _cross(d, ray_l) <= _ANGULAR_BAND * abs(ray_l)
        ):
            raise ValueError(
                "direction does not point into the corner sector"
            )
    elif isinstance(anchor, PointAnchor):
        t = anchor.triangle
        p = complex(anchor.point)
        tri = charts[t]
        scale = max(sides[t])
        for e in range(3):
            a, b = tri[e], tri[(e + 1) % 3]
            if _cross(b - a, p - a) < -1e-12 * scale * scale:
                raise ValueError(f"anchor point {p} lies outside triangle {t}")
    else:
        raise ValueError(f"invalid anchor {anchor!r}")

    rot, off = 1.0 + 0j, 0j
    segments = []
    crossings = []
    remaining = float(max_length)
    status = BUDGET_EXHAUSTED
    end_anchor = None
    entry = None  # no entry edge at the start

    for _ in range(max_crossings + 1):
        tri = charts[t]
        scale = max(sides[t])
        eps_v = VERTEX_HIT_REL_TOL * scale
        eps_pos = 1e-12 * scale

        best = None
        for e in range(3):
            if e == entry:
                continue
            a = tri[e]
            ab = tri[(e + 1) % 3] - a
            denom = _cross(d, ab)
            if abs(denom) < 1e-30:
                continue
            s_hit = _cross(a - p, ab) / denom
            u = _cross(a - p, d) / denom
            if s_hit <= eps_pos or u < -1e-9 or u > 1.0 + 1e-9:
                continue
            if best is None or s_hit < best[0]:
                best = (s_hit, e)

        cut = best is None or best[0] >= remaining
        reach = remaining if cut else best[0]
        hit_corner = None
        hit_s = math.inf
        for c in range(3):
            q = tri[c]
            qp = q - p
            sc = qp.real * d.real + qp.imag * d.imag
            sc = min(max(sc, 0.0), reach)
            if sc > eps_pos and abs(p + sc * d - q) <= eps_v and sc < hit_s:
                hit_corner, hit_s = c, sc
        if hit_corner is not None:
            q = tri[hit_corner]
            segments.append(TraceSegment(t, p, q, rot, off))
            status = HIT_VERTEX
            end_anchor = VertexAnchor(t, hit_corner)
            break
        if cut:
            end = p + remaining * d
            segments.append(TraceSegment(t, p, end, rot, off))
            status = COMPLETED
            end_anchor = PointAnchor(t, end)
            break

        s_hit, e_exit = best
        x = p + s_hit * d
        segments.append(TraceSegment(t, p, x, rot, off))
        crossings.append((t, e_exit))
        remaining -= s_hit
        t2, e2 = surface.gluing[(t, e_exit)]
        r, o = surface.transition((t, e_exit))
        p = (x - o) / r
        d = d / r
        d /= abs(d)
        rot, off = rot * r, rot * o + off
        rot /= abs(rot)
        t, entry = t2, e2
    else:
        end_anchor = PointAnchor(t, p)

    total = math.fsum(seg.length for seg in segments)
    return Trajectory(
        surface,
        tuple(segments),
        tuple(crossings),
        anchor,
        end_anchor,
        total,
        status,
    )


# -- self-intersections ------------------------------------------------------


def count_self_intersections(traj: Trajectory) -> int:
    """Number of transverse pairs over all self-intersection points.

    Segments are grouped by triangle; a pair of non-adjacent passes counts
    when the open segments cross properly (tangential contact and shared
    endpoints do not count).  Several passes through one point contribute
    one per crossing pair.
    """
    total = 0
    for _, mats in _segment_groups(traj).items():
        total += int(_proper_crossing_matrix(*mats).sum())
    return total


def is_simple(traj: Trajectory) -> bool:
    for _, mats in _segment_groups(traj).items():
        if bool(_proper_crossing_matrix(*mats).any()):
            return False
    return True


def _segment_groups(traj):
    groups = {}
    for i, seg in enumerate(traj.segments):
        groups.setdefault(seg.triangle, []).append((i, seg.start, seg.end))
    out = {}
    for tri, items in groups.items():
        if len(items) < 2:
            continue
        gi = np.array([i for i, _, _ in items], dtype=np.int64)
        a = np.array([s for _, s, _ in items], dtype=np.complex128)
        b = np.array([e for _, _, e in items], dtype=np.complex128)
        out[tri] = (gi, a, b)
    return out


def _proper_crossing_matrix(gi, a, b, tol=1e-12):
    """Strict upper-triangular boolean matrix of properly crossing pairs."""
    ax, ay = a.real, a.imag
    bx, by = b.real, b.imag
    ux, uy = bx - ax, by - ay
    ln = np.hypot(ux, uy)
    span = max(
        ax.max() - ax.min() + bx.max() - bx.min(),
        ay.max() - ay.min() + by.max() - by.min(),
        1e-300,
    )
    eps = tol * np.maximum(ln, 1e-300) * span

    def sgn(v, e):
        return (v > e).astype(np.int8) - (v < -e).astype(np.int8)

    # orientation of segment j endpoints against line i and vice versa
    d1 = ux[:, None] * (ay[None, :] - ay[:, None]) - uy[:, None] * (
        ax[None, :] - ax[:, None]
    )
    d2 = ux[:, None] * (by[None, :] - ay[:, None]) - uy[:, None] * (
        bx[None, :] - ax[:, None]
    )
    d3 = ux[None, :] * (ay[:, None] - ay[None, :]) - uy[None, :] * (
        ax[:, None] - ax[None, :]
    )
    d4 = ux[None, :] * (by[:, None] - ay[None, :]) - uy[None, :] * (
        bx[:, None] - ax[None, :]
    )
    e_row = eps[:, None]
    e_col = eps[None, :]
    # strictness makes shared endpoints and tangential contact score zero,
    # so consecutive passes (which meet on a glued edge) need no special
    # exclusion even when both land in the same chart
    proper = (sgn(d1, e_row) * sgn(d2, e_row) < 0) & (
        sgn(d3, e_col) * sgn(d4, e_col) < 0
    )
    upper = gi[:, None] < gi[None, :]
    return proper & upper


def crossing_pairs(traj: Trajectory):
    """All proper self-crossings as (i, j, s_i, s_j, point) with i < j;
    the s values are arc lengths along the two segments and the point is
    in the chart of the shared triangle."""
    out = []
    for tri, (gi, a, b) in _segment_groups(traj).items():
        mat = _proper_crossing_matrix(gi, a, b)
        for r, c in zip(*np.nonzero(mat)):
            i, j = int(gi[r]), int(gi[c])
            a1, b1 = complex(a[r]), complex(b[r])
            a2, b2 = complex(a[c]), complex(b[c])
            u1 = b1 - a1
            u2 = b2 - a2
            denom = _cross(u1, u2)
            ti = _cross(a2 - a1, u2) / denom
            tj = _cross(a2 - a1, u1) / denom
            point = a1 + ti * u1
            out.append((i, j, ti * abs(u1), tj * abs(u2), point))
    out.sort()
    return out


def extract_monogons(traj: Trajectory):
    """Embedded geodesic loops cut out by self-intersections.

    For every self-crossing whose intervening loop is itself simple (and
    vertex free, which traced trajectories guarantee), returns the loop's
    interior angle and its length.  The interior angle is pi minus the
    angle between the two oriented passes at the crossing, i.e. the smaller
    of the two angles the loop makes at its corner.
    """
    segs = traj.segments
    out = []
    for i, j, si, sj, point in crossing_pairs(traj):
        sub = []
        first = segs[i]
        d_i = (first.end - first.start) / first.length
        sub.append(TraceSegment(first.triangle, point, first.end, first.rot, first.off))
        for k in range(i + 1, j):
            sub.append(segs[k])
        last = segs[j]
        d_j = (last.end - last.start) / last.length
        sub.append(TraceSegment(last.triangle, last.start, point, last.rot, last.off))
        loop = Trajectory(
            traj.surface,
            tuple(sub),
            (),
            PointAnchor(first.triangle, point),
            PointAnchor(last.triangle, point),
            math.fsum(s.length for s in sub),
            COMPLETED,
        )
        if not is_simple(loop):
            continue
        dot = d_i.real * d_j.real + d_i.imag * d_j.imag
        cross = _cross(d_i, d_j)
        phi = math.atan2(abs(cross), dot)
        out.append((math.pi - phi, loop.length))
    return out


# -- combinatorial measurements ----------------------------------------------


def lies_in_edge(traj: Trajectory, tol: float = 1e-9) -> bool:
    """True when every segment lies along an edge of its triangle."""
    charts = traj.surface.charts
    for seg in traj.segments:
        tri = charts[seg.triangle]
        on_some_edge = False
        for e in range(3):
            a, b = tri[e], tri[(e + 1) % 3]
            ab = b - a
            lim = tol * abs(ab) ** 2
            if (
                abs(_cross(ab, seg.start - a)) <= lim
                and abs(_cross(ab, seg.end - a)) <= lim
            ):
                on_some_edge = True
                break
        if not on_some_edge:
            return False
    return True


def combinatorial_length(traj: Trajectory, delaunay_surface: ConeSurface) -> int:
    """Number of maximal sub-segments off the Delaunay edges: crossings
    plus one, or zero for a trajectory contained in a Delaunay edge."""
    if traj.surface is not delaunay_surface and traj.surface != delaunay_surface:
        raise ValueError("trajectory was not traced on the given surface")
    if lies_in_edge(traj):
        return 0
    return len(traj.crossings) + 1


def per_triangle_crossings(traj: Trajectory) -> dict:
    """Number of segment passes through each triangle (absent means 0)."""
    if lies_in_edge(traj):
        return {}
    counts = {}
    for seg in traj.segments:
        counts[seg.triangle] = counts.get(seg.triangle, 0) + 1
    return counts


# -- saddle connections --------------------------------------------------------


@dataclass(frozen=True)
class SaddleConnection:
    """An unoriented saddle connection in canonical orientation.

    ``kind`` is "edge" for connections lying in a triangulation edge
    (empty crossing sequence, ``edge`` holds the undirected edge id) and
    "interior" otherwise.  The canonical orientation is the
    lexicographically smaller of the two oriented crossing encodings.
    """

    surface: ConeSurface = field(repr=False, compare=False)
    kind: str
    length: float
    start_vertex: int
    end_vertex: int
    start_corner: tuple
    end_corner: tuple
    crossings: tuple
    edge: int | None = None

    @cached_property
    def trajectory(self) -> Trajectory:
        if self.kind == "edge":
            t, e = self.start_corner[0], self.start_corner[1]
            tri = self.surface.charts[t]
            seg = TraceSegment(t, tri[e], tri[(e + 1) % 3], 1.0 + 0j, 0j)
            return Trajectory(
                self.surface,
                (seg,),
                (),
                VertexAnchor(t, e),
                VertexAnchor(t, (e + 1) % 3),
                seg.length,
                HIT_VERTEX,
            )
        return _materialize(
            self.surface, self.start_corner, self.crossings, self.end_corner
        )


@dataclass(frozen=True)
class EnumerationResult:
    """Saddle connections up to a length cutoff, with completeness flag."""

    connections: tuple
    complete: bool
    nodes: int
    max_length: float

    def __iter__(self):
        return iter(self.connections)

    def __len__(self):
        return len(self.connections)


def _materialize(surface, start_corner, chain, end_corner) -> Trajectory:
    """Rebuild the per-triangle segments of a connection from its chain by
    developing the chain and clipping the straight segment on each window."""
    charts = surface.charts
    t0, c0 = start_corner
    isos = [(1.0 + 0j, -charts[t0][c0])]
    tri_seq = [t0]
    windows = []
    for t, e in chain:
        r0, o0 = isos[-1]
        wa = r0 * charts[t][e] + o0
        wb = r0 * charts[t][(e + 1) % 3] + o0
        windows.append((wa, wb))
        rt, ot = surface.transition((t, e))
        r = r0 * rt
        r /= abs(r)
        isos.append((r, r0 * ot + o0))
        tri_seq.append(surface.gluing[(t, e)][0])
    rl, ol = isos[-1]
    z = rl * charts[end_corner[0]][end_corner[1]] + ol
    pts = [0j]
    for wa, wb in windows:
        dw = wb - wa
        s = _cross(wa, dw) / _cross(z, dw)
        pts.append(s * z)
    pts.append(z)
    segments = []
    for k, t in enumerate(tri_seq):
        r, o = isos[k]
        segments.append(
            TraceSegment(t, (pts[k] - o) / r, (pts[k + 1] - o) / r, r, o)
        )
    return Trajectory(
        surface,
        tuple(segments),
        tuple(chain),
        VertexAnchor(*start_corner),
        VertexAnchor(*end_corner),
        abs(z),
        HIT_VERTEX,
    )


def chain_endpoint(surface, start_corner, chain, end_corner) -> complex:
    """Developed position of the end corner along a chain (the connection's
    holonomy vector); its modulus is the connection length."""
    charts = surface.charts
    t0, c0 = start_corner
    r0, o0 = 1.0 + 0j, -charts[t0][c0]
    for t, e in chain:
        rt, ot = surface.transition((t, e))
        r0, o0 = r0 * rt, r0 * ot + o0
        r0 /= abs(r0)
    return r0 * charts[end_corner[0]][end_corner[1]] + o0


def _window_min_dist(ea, eb, vr, vl):
    """Minimal distance from the origin to the window segment restricted to
    the direction wedge (vr, vl); inf when the restriction is empty."""
    u0, u1 = 0.0, 1.0
    for fa, fb in (
        (_cross(vr, ea), _cross(vr, eb)),
        (-_cross(vl, ea), -_cross(vl, eb)),
    ):
        if fa < 0.0:
            if fb < 0.0:
                return math.inf
            u0 = max(u0, fa / (fa - fb))
        elif fb < 0.0:
            u1 = min(u1, fa / (fa - fb))
    if u0 > u1:
        return math.inf
    pa = ea + u0 * (eb - ea)
    pb = ea + u1 * (eb - ea)
    dp = pb - pa
    dd = dp.real * dp.real + dp.imag * dp.imag
    if dd <= 0.0:
        return abs(pa)
    tproj = -(pa.real * dp.real + pa.imag * dp.imag) / dd
    tproj = min(max(tproj, 0.0), 1.0)
    return abs(pa + tproj * dp)


def _search_root(surface, root, max_length, node_budget, deadline=None):
    """Sector search of all oriented saddle connections leaving one corner.

    Returns (records, nodes, complete) where each record is
    (start_corner, chain, end_corner).  A node is one (chain, wedge) pair;
    the wedge splits at every vertex image falling strictly inside it, and
    directions within the angular ambiguity band of a vertex image are
    treated as hitting that vertex (excluded on both sides).
    """
    charts = surface.charts
    gluing = surface.gluing
    t0, c0 = root
    base = -charts[t0][c0]
    ea = charts[t0][(c0 + 1) % 3] + base
    eb = charts[t0][(c0 + 2) % 3] + base
    records = []
    stack = [((t0, (c0 + 1) % 3), ea, eb, ea / abs(ea), eb / abs(eb), None)]
    nodes = 0
    complete = True
    limit = max_length * (1.0 + 1e-12)
    cross = _cross
    while stack:
        slot, ea, eb, vr, vl, chain = stack.pop()
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            complete = False
            break
        if deadline is not None and nodes % 4096 == 0 and _now() > deadline:
            complete = False
            break
        if _window_min_dist(ea, eb, vr, vl) > limit:
            continue
        t2, e2 = gluing[slot]
        ch = charts[t2]
        qa, qb = ch[e2], ch[(e2 + 1) % 3]
        rr = (ea - eb) / (qb - qa)
        rr /= abs(rr)
        oo = eb - rr * qa
        apex = rr * ch[(e2 + 2) % 3] + oo
        d = abs(apex)
        band = _ANGULAR_BAND * d
        cr = cross(vr, apex)
        cl = cross(apex, vl)
        new_chain = (chain, slot)
        right_slot = (t2, (e2 + 1) % 3)
        left_slot = (t2, (e2 + 2) % 3)
        if cr > band and cl > band:
            if d <= limit:
                records.append((new_chain, (t2, (e2 + 2) % 3)))
            va = apex / d
            stack.append((left_slot, apex, eb, va, vl, new_chain))
            stack.append((right_slot, ea, apex, vr, va, new_chain))
        elif cr <= band and cl <= band:
            continue
        elif cl <= band:
            vl2 = apex / d if cl > 0.0 else vl
            stack.append((right_slot, ea, apex, vr, vl2, new_chain))
        else:
            vr2 = apex / d if cr > 0.0 else vr
            stack.append((left_slot, apex, eb, vr2, vl, new_chain))
    out = []
    for chain, end_corner in records:
        links = []
        node = chain
        while node is not None:
            node, slot = node
            links.append(slot)
        links.reverse()
        out.append((root, tuple(links), end_corner))
    return out, nodes, complete


def _search_root_task(args):
    return _search_root(*args)


def enumerate_saddle_connections(
    surface: ConeSurface,
    max_length: float,
    node_budget: int | None = None,
    workers: int = 1,
    deadline: float | None = None,
) -> EnumerationResult:
    """Every unoriented saddle connection of length at most max_length.

    Edge connections are read off the triangulation; all others come from
    the per-corner sector search.  Each connection is reported once, in a
    canonical orientation, sorted by (length, crossing sequence).  A node
    budget is divided evenly over the root corners so results never depend
    on scheduling; when any root exhausts its share (or the deadline
    passes) the result is flagged incomplete instead of failing.
    """
    surface.require_valid()
    if not max_length > 0.0:
        raise ValueError("max_length must be positive")
    roots = sorted(surface.slots())
    per_root = None if node_budget is None else max(1, node_budget // len(roots))

    tasks = [
        (surface, root, float(max_length), per_root, deadline) for root in roots
    ]
    total_nodes = 0
    complete = True
    raw = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_root_task, tasks))
    else:
        results = []
        for task in tasks:
            results.append(_search_root_task(task))
            if deadline is not None and _now() > deadline:
                complete = False
                break
    for records, nodes, root_complete in results:
        total_nodes += nodes
        complete = complete and root_complete
        raw.extend(records)

    glue_id = {}
    for slot in surface.slots():
        t2, e2 = surface.gluing[slot]
        glue_id[3 * slot[0] + slot[1]] = 3 * t2 + e2

    dedup = {}
    for start_corner, chain, end_corner in raw:
        seq = tuple(3 * t + e for t, e in chain)
        rseq = tuple(glue_id[s] for s in reversed(seq))
        sid = 3 * start_corner[0] + start_corner[1]
        eid = 3 * end_corner[0] + end_corner[1]
        fwd = (sid, seq, eid)
        rev = (eid, rseq, sid)
        if fwd <= rev:
            key = fwd
            canon = (start_corner, chain, end_corner)
        else:
            key = rev
            canon = (
                end_corner,
                tuple(surface.gluing[s] for s in reversed(chain)),
                start_corner,
            )
        dedup.setdefault(key, canon)

    connections = []
    limit = max_length * (1.0 + 1e-12)
    for eid, (slot, other) in enumerate(surface.edges):
        t, e = slot
        length = surface.sides[t][e]
        if length > limit:
            continue
        a = (t, e)
        b = (t, (e + 1) % 3)
        connections.append(
            SaddleConnection(
                surface,
                "edge",
                length,
                surface.vertex_of[a],
                surface.vertex_of[b],
                a,
                b,
                (),
                edge=eid,
            )
        )
    for key in dedup:
        start_corner, chain, end_corner = dedup[key]
        z = chain_endpoint(surface, start_corner, chain, end_corner)
        connections.append(
            SaddleConnection(
                surface,
                "interior",
                abs(z),
                surface.vertex_of[start_corner],
                surface.vertex_of[end_corner],
                start_corner,
                end_corner,
                chain,
            )
        )

    def sort_key(conn):
        if conn.kind == "edge":
            sid = 3 * conn.start_corner[0] + conn.start_corner[1]
            return (conn.length, (), sid, sid)
        return (
            conn.length,
            tuple(3 * t + e for t, e in conn.crossings),
            3 * conn.start_corner[0] + conn.start_corner[1],
            3 * conn.end_corner[0] + conn.end_corner[1],
        )

    connections.sort(key=sort_key)
    return EnumerationResult(tuple(connections), complete, total_nodes, max_length)


def _now():
    import time

    return time.monotonic()


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real
