"""Delaunay triangulation of a cone surface by intrinsic edge flips.

An interior edge is locally Delaunay when, after unfolding its two adjacent
triangles into the plane, the far vertex lies outside or on the circumcircle
of the near triangle.  Repeatedly flipping any failing edge terminates on a
cone surface; cocyclic configurations count as Delaunay so the flip count is
finite and the result deterministic (lowest edge index first, rescan after
every flip).

On a unit-area surface with curvature gap delta > 0, every Delaunay edge
satisfies L^2 < 4/pi + 1/(2*pi*delta), which in turn bounds the diameter of
the Delaunay skeleton by (n+1) * (2/sqrt(pi) + 1/sqrt(2*pi*delta)).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .surface import ConeSurface, InvalidSurfaceError

FLIP_CAP_FACTOR = 10


class FlipError(RuntimeError):
    """Flip loop exceeded its iteration cap or hit a degenerate quad."""


@dataclass(frozen=True)
class FlipReport:
    flips: int
    cap: int
    all_delaunay: bool
    edge_lengths: tuple

    def __str__(self):
        lengths = ",".join(f"{x:.12g}" for x in self.edge_lengths)
        return (
            f"flips={self.flips}\ncap={self.cap}\n"
            f"all_delaunay={str(self.all_delaunay).lower()}\n"
            f"edge_lengths={lengths}"
        )


def _unfold_quad(sides, gluing, charts, slot):
    """Develop the two triangles adjacent to ``slot`` into the chart of the
    first: returns (pa, pb, apex1, apex2) with pa, pb the edge endpoints,
    apex1 above the edge and apex2 the unfolded far vertex below it."""
    t, e = slot
    t2, e2 = gluing[slot]
    pa = charts[t][e]
    pb = charts[t][(e + 1) % 3]
    apex1 = charts[t][(e + 2) % 3]
    qa = charts[t2][e2]
    qb = charts[t2][(e2 + 1) % 3]
    rot = (pa - pb) / (qb - qa)
    rot /= abs(rot)
    off = pb - rot * qa
    apex2 = rot * charts[t2][(e2 + 2) % 3] + off
    return pa, pb, apex1, apex2


def _incircle(pa, pb, pc, pd) -> float:
    """Positive when pd lies strictly inside the circumcircle of the
    counterclockwise triangle (pa, pb, pc)."""
    adx = pa.real - pd.real
    ady = pa.imag - pd.imag
    bdx = pb.real - pd.real
    bdy = pb.imag - pd.imag
    cdx = pc.real - pd.real
    cdy = pc.imag - pd.imag
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    return (
        alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
    )


def is_locally_delaunay(s: ConeSurface, slot, tol: float = 1e-9) -> bool:
    """Empty-circumdisk test across one edge; ties count as Delaunay.

    The determinant scales like length^4, so the tolerance is taken
    relative to the fourth power of the local size.
    """
    s.require_valid()
    return _locally_delaunay(s.sides, s.gluing, s.charts, slot, tol)


def _locally_delaunay(sides, gluing, charts, slot, tol) -> bool:
    pa, pb, apex1, apex2 = _unfold_quad(sides, gluing, charts, slot)
    scale = max(abs(pb - pa), abs(apex1 - pa), abs(apex2 - pa))
    if _cross(pb - pa, apex1 - pa) <= 0.0:
        raise FlipError(f"degenerate unfolded quadrilateral at slot {slot}")
    det = _incircle(pa, pb, apex1, apex2)
    return det <= tol * scale ** 4


def delaunayize(s: ConeSurface, tol: float = 1e-9, cap: int | None = None):
    """Flip edges until every edge passes the local Delaunay test.

    Returns (surface, FlipReport).  The vertex set, cone angles and area
    are preserved; only the triangulation changes.  The default iteration
    cap is 10 * E^2.
    """
    s.require_valid()
    sides = list(s.sides)
    gluing = dict(s.gluing)
    charts = list(s.charts)
    num_edges = 3 * len(sides) // 2
    if cap is None:
        cap = FLIP_CAP_FACTOR * num_edges * num_edges
    flips = 0
    while True:
        bad = _first_non_delaunay(sides, gluing, charts, tol)
        if bad is None:
            break
        if flips >= cap:
            raise FlipError(f"flip count exceeded cap {cap}")
        _flip(sides, gluing, charts, bad)
        flips += 1
    if flips == 0:
        result = s
    else:
        result = ConeSurface(sides, gluing)
        result.require_valid()
    lengths = tuple(result.edge_length(i) for i in range(len(result.edges)))
    return result, FlipReport(flips, cap, True, lengths)


def _first_non_delaunay(sides, gluing, charts, tol):
    """Lowest-index edge failing the local test, or None.

    Edges glued to another edge of the same triangle enclose a single cone
    in one triangle; the two quad apexes are then distinct corners of that
    triangle, whose angles sum below pi, so such edges are always Delaunay
    and are never flipped.
    """
    edges = sorted(
        (slot, other)
        for slot, other in gluing.items()
        if slot < other
    )
    for slot, other in edges:
        if slot[0] == other[0]:
            continue
        if not _locally_delaunay(sides, gluing, charts, slot, tol):
            return slot
    return None


def _flip(sides, gluing, charts, slot):
    """Replace the edge at ``slot`` by the other diagonal of its unfolded
    quadrilateral, reusing the two triangle indices."""
    t, e = slot
    t2, e2 = gluing[slot]
    pa, pb, apex1, apex2 = _unfold_quad(sides, gluing, charts, slot)
    # strict convexity of the quad (pa, apex2, pb, apex1): the diagonals
    # pa-pb and apex1-apex2 must cross properly
    d1 = _cross(apex2 - apex1, pa - apex1)
    d2 = _cross(apex2 - apex1, pb - apex1)
    d3 = _cross(pb - pa, apex1 - pa)
    d4 = _cross(pb - pa, apex2 - pa)
    if not (d1 * d2 < 0.0 and d3 * d4 < 0.0):
        raise FlipError(f"flip on a non-convex quadrilateral at slot {slot}")

    old = {
        "t1_right": ((t2, (e2 + 1) % 3), gluing[(t2, (e2 + 1) % 3)]),
        "t1_left": ((t, (e + 2) % 3), gluing[(t, (e + 2) % 3)]),
        "t2_right": ((t, (e + 1) % 3), gluing[(t, (e + 1) % 3)]),
        "t2_left": ((t2, (e2 + 2) % 3), gluing[(t2, (e2 + 2) % 3)]),
    }
    # new triangle t: (pa, apex2, apex1); new triangle t2: (pb, apex1, apex2)
    newpos = {
        old["t1_right"][0]: (t, 0),
        old["t1_left"][0]: (t, 2),
        old["t2_right"][0]: (t2, 0),
        old["t2_left"][0]: (t2, 2),
    }
    sides[t] = (abs(apex2 - pa), abs(apex1 - apex2), abs(pa - apex1))
    sides[t2] = (abs(apex1 - pb), abs(apex2 - apex1), abs(pb - apex2))

    for key in ("t1_right", "t1_left", "t2_right", "t2_left"):
        old_slot, partner = old[key]
        new_slot = newpos[old_slot]
        new_partner = newpos.get(partner, partner)
        gluing[new_slot] = new_partner
        gluing[new_partner] = new_slot
    gluing[(t, 1)] = (t2, 1)
    gluing[(t2, 1)] = (t, 1)

    charts[t] = _chart(sides[t])
    charts[t2] = _chart(sides[t2])


def _chart(lengths):
    l0, l1, l2 = lengths
    x = (l0 * l0 + l2 * l2 - l1 * l1) / (2.0 * l0)
    y2 = l2 * l2 - x * x
    if y2 <= 0.0:
        raise FlipError("flip produced a degenerate triangle")
    return (0j, complex(l0, 0.0), complex(x, math.sqrt(y2)))


# -- bound checks ------------------------------------------------------------


@dataclass(frozen=True)
class EdgeBoundReport:
    threshold: float  # bound on L^2
    squared_lengths: tuple
    violations: tuple  # (edge id, L^2) pairs

    @property
    def passed(self) -> bool:
        return not self.violations


def check_edge_length_bound(s: ConeSurface, delta: float, tol: float = 1e-9) -> EdgeBoundReport:
    """Check L^2 < 4/pi + 1/(2*pi*delta) for every edge of a unit-area
    Delaunay surface.  A violation witnesses a bug, not a valid state."""
    s.require_valid()
    if not delta > 0.0:
        raise ValueError("edge length bound needs a positive curvature gap")
    if abs(s.area - 1.0) > 1e-6:
        raise ValueError(f"surface must have unit area, got {s.area!r}")
    threshold = 4.0 / math.pi + 1.0 / (2.0 * math.pi * delta)
    sq = tuple(s.edge_length(i) ** 2 for i in range(len(s.edges)))
    violations = tuple(
        (i, l2) for i, l2 in enumerate(sq) if not l2 < threshold + tol
    )
    return EdgeBoundReport(threshold, sq, violations)


def cone_graph_diameter(s: ConeSurface) -> float:
    """Largest shortest-path distance between cone points in the weighted
    Delaunay skeleton.  Upper-bounds the cone-to-cone metric diameter."""
    s.require_valid()
    n = s.num_vertices
    adjacency = [[] for _ in range(n)]
    for eid, (slot, _) in enumerate(s.edges):
        t, e = slot
        u = s.vertex_of[(t, e)]
        v = s.vertex_of[(t, (e + 1) % 3)]
        if u == v:
            continue
        w = s.edge_length(eid)
        adjacency[u].append((v, w))
        adjacency[v].append((u, w))
    diameter = 0.0
    for src in range(n):
        dist = [math.inf] * n
        dist[src] = 0.0
        heap = [(0.0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w in adjacency[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        worst = max(dist)
        if math.isinf(worst):
            raise InvalidSurfaceError("Delaunay skeleton is disconnected")
        diameter = max(diameter, worst)
    return diameter


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real
