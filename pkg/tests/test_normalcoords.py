import math

import pytest

from flatsphere.delaunay import delaunayize
from flatsphere.geodesic import (
    combinatorial_length,
    count_self_intersections,
    enumerate_saddle_connections,
)
from flatsphere.normalcoords import (
    InadmissibleCoordinateError,
    NormalCoordinate,
    decode_normal,
    encode_normal,
    triangle_arc_pattern,
    weak_composition_count,
)
from flatsphere.surface import normalize_area


def _canon_seq(surface, seq):
    fwd = tuple(seq)
    rev = tuple(surface.gluing[s] for s in reversed(fwd))
    return min(fwd, rev)


def test_encode_edge_connection_marker(equilateral):
    res = enumerate_saddle_connections(equilateral, 1.01)
    for conn in res:
        coord = encode_normal(conn, equilateral)
        assert coord.edge == conn.edge
        assert all(c == 0 for c in coord.counts)
        with pytest.raises(InadmissibleCoordinateError):
            decode_normal(coord, equilateral)


def test_encode_altitude_single_crossing(equilateral):
    res = enumerate_saddle_connections(equilateral, 1.8)
    for conn in res:
        if conn.kind != "interior":
            continue
        coord = encode_normal(conn, equilateral)
        assert sorted(coord.counts) == [0, 0, 1]
        assert coord.counts[equilateral.edge_index[conn.crossings[0]]] == 1


def test_decode_altitude_round_trip(equilateral):
    res = enumerate_saddle_connections(equilateral, 1.8)
    for conn in res:
        if conn.kind != "interior":
            continue
        coord = encode_normal(conn, equilateral)
        assert decode_normal(coord, equilateral) == conn.crossings


def test_round_trip_on_enumerated_simple_connections(corpus):
    for name in ("equilateral", "right306090", "pentagon"):
        flat, _ = delaunayize(normalize_area(corpus[name]))
        res = enumerate_saddle_connections(flat, 2.5)
        assert res.complete, name
        seen = set()
        for conn in res:
            if conn.kind == "edge":
                continue
            if count_self_intersections(conn.trajectory) > 0:
                continue
            coord = encode_normal(conn, flat, check_simple=False)
            decoded = decode_normal(coord, flat)
            assert _canon_seq(flat, decoded) == _canon_seq(flat, conn.crossings), name
            key = coord.key()
            assert key not in seen, (name, key)
            seen.add(key)


def test_counts_sum_is_combinatorial_length_minus_one(corpus):
    flat, _ = delaunayize(normalize_area(corpus["pentagon"]))
    res = enumerate_saddle_connections(flat, 2.5)
    checked = 0
    for conn in res:
        if conn.kind == "edge":
            continue
        if count_self_intersections(conn.trajectory) > 0:
            continue
        coord = encode_normal(conn, flat, check_simple=False)
        comb = combinatorial_length(conn.trajectory, flat)
        assert sum(coord.counts) == comb - 1
        checked += 1
    assert checked > 0


def test_encode_rejects_non_simple(thin_wedge):
    # build a self-crossing connection on the thin wedge; its trajectory
    # wraps the small cone, so encoding must refuse
    res = enumerate_saddle_connections(thin_wedge, 21.0)
    crossing = [
        c
        for c in res
        if c.kind == "interior" and count_self_intersections(c.trajectory) > 0
    ]
    assert crossing, "expected a self-crossing connection on the thin wedge"
    with pytest.raises(ValueError):
        encode_normal(crossing[0], thin_wedge)


def test_triangle_pattern_345_interior():
    arcs, anchors = triangle_arc_pattern((3, 4, 5))
    assert anchors == {}
    # every position paired exactly once, non-crossing families (2, 1, 3)
    assert len(arcs) == 12
    for end, other in arcs.items():
        assert other[0] == "e"
        assert arcs[(other[1], other[2])] == ("e",) + end


def test_triangle_pattern_parity_violation():
    with pytest.raises(InadmissibleCoordinateError):
        triangle_arc_pattern((1, 1, 1))


def test_triangle_pattern_triangle_inequality_violation():
    with pytest.raises(InadmissibleCoordinateError):
        triangle_arc_pattern((5, 1, 2))


def test_triangle_pattern_endpoint_counts():
    # one anchor at corner 0: opposite edge is 1 and p1 = p0 + p2 + 1
    arcs, anchors = triangle_arc_pattern((2, 6, 3), [("start", 0)])
    assert anchors["start"][0] == 1
    # breaking the +1 relation makes the corner encircled
    with pytest.raises(InadmissibleCoordinateError):
        triangle_arc_pattern((2, 4, 3), [("start", 0)])


def test_decode_rejects_parity_violation(equilateral):
    coord = NormalCoordinate((1, 1, 1), ((0, 0), (1, 0)))
    with pytest.raises(InadmissibleCoordinateError):
        decode_normal(coord, equilateral)


def test_decode_rejects_zero_vector(equilateral):
    coord = NormalCoordinate((0, 0, 0), ((0, 0), (1, 0)))
    with pytest.raises(InadmissibleCoordinateError):
        decode_normal(coord, equilateral)


def test_weak_composition_values():
    assert weak_composition_count(0, 3).count == 1
    assert weak_composition_count(0, 7).count == 1
    check = weak_composition_count(2, 3)
    assert check.count == 6
    assert check.satisfied
    assert check.count < check.proof_bound


def test_weak_composition_matches_direct_formula():
    assert weak_composition_count(2, 3).count == math.comb(4, 2)
    assert weak_composition_count(5, 4).count == math.comb(5 + 5, 5)


def test_weak_composition_large_parameters_no_overflow():
    check = weak_composition_count(10_000, 30)
    assert check.satisfied
    assert check.proof_bound_log2 > 0
