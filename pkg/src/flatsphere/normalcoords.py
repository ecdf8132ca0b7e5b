"""Normal coordinates of simple paths relative to a fixed triangulation.

A simple path between cone points that meets triangulation edges
transversely is encoded by its vector of per-edge crossing counts together
with its two endpoint corners.  Inside a triangle the counts determine a
unique non-crossing pattern of arcs: around each corner a nested family
joining its two edges, plus one arc from each endpoint corner to the
opposite edge.  Admissibility per triangle:

  * away from endpoints the three counts have even sum and satisfy the
    triangle inequality;
  * a triangle holding one endpoint at corner c satisfies
    p(opposite) = p(e1) + p(e2) + 1, which is exactly the statement that
    no arc encircles the anchored corner;
  * a triangle holding both endpoints at the same corner has the +2
    variant.

Decoding walks the arcs from the start corner, emitting the edge-slot
crossing sequence; it reproduces the path up to isotopy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .surface import ConeSurface


class InadmissibleCoordinateError(ValueError):
    """Counts and endpoints do not describe a normal simple path."""


@dataclass(frozen=True)
class NormalCoordinate:
    """Crossing counts indexed by undirected edge id, plus endpoint corners.

    ``edge`` is set (and the counts are all zero) for a connection that
    lies inside a triangulation edge; such paths are not normal and are
    excluded from encoding proper.
    """

    counts: tuple
    endpoints: tuple
    edge: int | None = None

    def key(self):
        """Hashable identity: counts with the unordered endpoint pair."""
        a, b = self.endpoints
        return (self.counts, (a, b) if a <= b else (b, a), self.edge)

    def __str__(self):
        return ";".join(str(c) for c in self.counts)


def encode_normal(conn, d: ConeSurface, check_simple: bool = True) -> NormalCoordinate:
    """Per-edge crossing counts of a simple saddle connection.

    Edge-type connections get an edge marker with an all-zero vector.
    Raises on a surface mismatch, on non-simple input (when
    ``check_simple``), and on counts failing admissibility.
    """
    if conn.surface is not d and conn.surface != d:
        raise ValueError("connection does not live on the given surface")
    num_edges = len(d.edges)
    if conn.kind == "edge":
        return NormalCoordinate(
            (0,) * num_edges, (conn.start_corner, conn.end_corner), conn.edge
        )
    if check_simple:
        from .geodesic import is_simple

        if not is_simple(conn.trajectory):
            raise ValueError("normal coordinates are defined for simple paths")
    counts = [0] * num_edges
    for slot in conn.crossings:
        counts[d.edge_index[slot]] += 1
    coord = NormalCoordinate(
        tuple(counts), (conn.start_corner, conn.end_corner)
    )
    _build_arcs(coord, d)  # admissibility side effect
    return coord


def decode_normal(coord: NormalCoordinate, d: ConeSurface):
    """Crossing sequence of the unique normal simple path with these counts.

    Walks arcs from the start corner through glued triangles until the end
    corner is reached.  Raises InadmissibleCoordinateError on parity or
    triangle-inequality violations, an all-zero vector, or counts that do
    not connect into a single path.
    """
    if coord.edge is not None:
        raise InadmissibleCoordinateError(
            "edge-type connections are not normal paths"
        )
    total = sum(coord.counts)
    if total == 0:
        raise InadmissibleCoordinateError("all-zero coordinate is not a path")
    arcmaps, corner_entry = _build_arcs(coord, d)

    def slot_count(slot):
        return coord.counts[d.edge_index[slot]]

    sequence = []
    t, e, pos = corner_entry["start"]
    visited = set()
    for _ in range(total + 1):
        sequence.append((t, e))
        if (t, e, pos) in visited:
            raise InadmissibleCoordinateError("walk revisits a crossing")
        visited.add((t, e, pos))
        t2, e2 = d.gluing[(t, e)]
        pos2 = slot_count((t, e)) - 1 - pos
        nxt = arcmaps[t2][(e2, pos2)]
        if nxt[0] == "c":
            if nxt[1] != "end":
                raise InadmissibleCoordinateError(
                    "walk returns to the start corner"
                )
            if len(sequence) != total:
                raise InadmissibleCoordinateError(
                    "counts contain closed components besides the path"
                )
            return tuple(sequence)
        _, e, pos = nxt
        t = t2
    raise InadmissibleCoordinateError("walk does not terminate")


def _build_arcs(coord: NormalCoordinate, d: ConeSurface):
    """Arc pattern per triangle; raises when the counts are inadmissible.

    Returns (arcmaps, corner_entry): arcmaps[t] maps a local (edge, pos)
    to its partner end, either ('e', edge, pos) or ('c', tag); corner_entry
    locates the 'start' and 'end' anchors as global (t, edge, pos).
    """
    if len(coord.counts) != len(d.edges):
        raise ValueError(
            f"expected {len(d.edges)} counts, got {len(coord.counts)}"
        )
    if any(c < 0 for c in coord.counts):
        raise InadmissibleCoordinateError("negative crossing count")
    start, end = coord.endpoints
    anchors_by_tri = {}
    for tag, (t, c) in (("start", start), ("end", end)):
        if not (0 <= t < d.num_triangles and c in (0, 1, 2)):
            raise ValueError(f"endpoint {(t, c)} is not a corner slot")
        anchors_by_tri.setdefault(t, []).append((tag, c))

    arcmaps = {}
    corner_entry = {}
    for t in range(d.num_triangles):
        p = tuple(coord.counts[d.edge_index[(t, e)]] for e in range(3))
        anchors = anchors_by_tri.get(t, [])
        try:
            arcs, anchor_pos = triangle_arc_pattern(p, anchors)
        except InadmissibleCoordinateError as exc:
            raise InadmissibleCoordinateError(f"triangle {t}: {exc}") from None
        arcmaps[t] = arcs
        for tag, (e, pos) in anchor_pos.items():
            corner_entry[tag] = (t, e, pos)
    return arcmaps, corner_entry


def triangle_arc_pattern(p, anchors=()):
    """Non-crossing arc pattern of one triangle with edge counts (p0,p1,p2).

    ``anchors`` lists (tag, corner) endpoint arcs from a corner to its
    opposite edge.  Returns (arcs, anchor_positions): arcs maps a local
    (edge, position) end to its partner, ('e', edge, position) or
    ('c', tag); positions run from corner e to corner e+1 along edge e.
    Around each corner k sits a nested family of (q_k + q_{k+2} - q_{k+1})/2
    arcs joining its two edges, computed after removing the endpoint arcs;
    an anchored corner must carry an empty family, which is the +1 / +2
    endpoint count condition.  When both anchors share a corner, the start
    arc takes the smaller position on the opposite edge.
    """
    q = list(p)
    for _, c in anchors:
        q[(c + 1) % 3] -= 1
    if any(v < 0 for v in q):
        raise InadmissibleCoordinateError("endpoint arc exceeds edge count")
    if sum(q) % 2 != 0:
        raise InadmissibleCoordinateError("odd crossing sum")
    x = [0, 0, 0]
    for k in range(3):
        v = q[k] + q[(k + 2) % 3] - q[(k + 1) % 3]
        if v < 0 or v % 2 != 0:
            raise InadmissibleCoordinateError(
                "counts violate the triangle inequality"
            )
        x[k] = v // 2
    for _, c in anchors:
        if x[c] != 0:
            raise InadmissibleCoordinateError(
                f"arcs encircle the anchored corner {c}"
            )

    arcs = {}
    for k in range(3):
        for m in range(x[k]):
            end_a = (k, m)
            end_b = ((k + 2) % 3, p[(k + 2) % 3] - 1 - m)
            arcs[end_a] = ("e",) + end_b
            arcs[end_b] = ("e",) + end_a
    anchor_pos = {}
    by_corner = {}
    for tag, c in sorted(anchors, key=lambda a: 0 if a[0] == "start" else 1):
        by_corner.setdefault(c, []).append(tag)
    for c, tags in by_corner.items():
        e = (c + 1) % 3
        for j, tag in enumerate(tags):
            pos = x[e] + j
            arcs[(e, pos)] = ("c", tag)
            anchor_pos[tag] = (e, pos)
    return arcs, anchor_pos


@dataclass(frozen=True)
class WeakCompositionCheck:
    count: int
    proof_bound: float
    proof_bound_log2: float
    satisfied: bool


def weak_composition_count(k: int, n: int) -> WeakCompositionCheck:
    """Weak compositions of k into 3(n-2) parts, with the counting bound.

    The count is C(k + 3(n-2) - 1, 3(n-2) - 1), and it stays strictly
    below (k + 3n - 7)^(3n-7) / (3n-7)!; the bound is evaluated in log
    space so large parameters never overflow.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if n < 3:
        raise ValueError("n must be at least 3")
    r = 3 * (n - 2) - 1
    m = k + r
    count = math.comb(m, r)
    log2_bound = (r * math.log2(m)) - math.lgamma(r + 1) / math.log(2.0)
    bound = 2.0 ** log2_bound if log2_bound < 1023 else math.inf
    satisfied = math.log2(count) < log2_bound
    return WeakCompositionCheck(count, bound, log2_bound, satisfied)
