import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatsphere.surface import (
    ConeSurface,
    InvalidSurfaceError,
    ParseError,
    cone_data,
    generate_doubled_polygon,
    normalize_area,
    parse_surface,
    random_convex_polygon,
    serialize_surface,
    validate_surface,
)

SQRT3 = math.sqrt(3.0)

MIRROR_FSPH = """\
fsph 1
# doubled unit equilateral triangle
t 0 1.0 1.0 1.0
t 1 1.0 1.0 1.0
g 0 0 1 2
g 0 1 1 1
g 0 2 1 0
"""


def test_parse_mirror_pair_counts():
    s = parse_surface(MIRROR_FSPH)
    assert s.num_triangles == 2
    assert len(s.edges) == 3
    assert s.num_vertices == 3


def test_parse_duplicate_gluing_rejected():
    text = MIRROR_FSPH + "g 0 0 1 1\n"
    with pytest.raises(ParseError) as err:
        parse_surface(text)
    assert "glued twice" in str(err.value)


def test_parse_zero_length_rejected():
    text = "fsph 1\nt 0 1.0 0 1.0\n"
    with pytest.raises(ParseError) as err:
        parse_surface(text)
    assert "nonpositive" in str(err.value)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_surface("fsph 1\nt 0 1 1 1\nq nope\n")
    assert err.value.line == 3


def test_parse_out_of_range_index():
    with pytest.raises(ParseError):
        parse_surface("fsph 1\nt 0 1 1 1\ng 0 0 5 1\n")


def test_validate_doubled_equilateral(equilateral):
    report = validate_surface(equilateral)
    assert report.passed
    assert report.gauss_bonnet_residual < 1e-12


def test_validate_length_mismatch():
    s = parse_surface(MIRROR_FSPH.replace("t 1 1.0 1.0 1.0", "t 1 1.0 1.1 1.0"))
    report = validate_surface(s)
    assert not report.passed
    codes = {c.code for c in report.failures()}
    assert "length-mismatch" in codes


def test_validate_torus_fails_euler():
    # two equilateral triangles glued into the hexagonal torus: V=1, chi=0
    gluing = {}
    for e in range(3):
        gluing[(0, e)] = (1, e)
        gluing[(1, e)] = (0, e)
    torus = ConeSurface([(1, 1, 1), (1, 1, 1)], gluing)
    report = validate_surface(torus)
    assert not report.passed
    codes = {c.code for c in report.failures()}
    assert "euler-characteristic" in codes


def test_validate_unglued_slot():
    s = parse_surface("\n".join(MIRROR_FSPH.splitlines()[:-1]) + "\n")
    report = validate_surface(s)
    assert not report.passed
    assert "gluing-involution" in {c.code for c in report.failures()}


def test_cone_data_equilateral(equilateral):
    cones = cone_data(equilateral)
    assert len(cones) == 3
    for p in cones:
        assert p.angle == pytest.approx(2 * math.pi / 3, abs=1e-12)
        assert p.curvature == pytest.approx(2 / 3, abs=1e-12)


def test_cone_data_square(square):
    cones = cone_data(square)
    assert len(cones) == 4
    for p in cones:
        assert p.angle == pytest.approx(math.pi, abs=1e-12)
        assert p.curvature == pytest.approx(0.5, abs=1e-12)


def test_cone_data_right_triangle():
    s = generate_doubled_polygon([(0, 0), (1, 0), (0, SQRT3)])
    ks = sorted(p.curvature for p in cone_data(s))
    assert ks == pytest.approx([0.5, 2 / 3, 5 / 6], abs=1e-12)


def test_normalize_area_scales_equilateral(equilateral):
    unit = normalize_area(equilateral)
    assert unit.area == pytest.approx(1.0, abs=1e-12)
    factor = unit.sides[0][0] / equilateral.sides[0][0]
    assert factor == pytest.approx(1.0 / math.sqrt(SQRT3 / 2), abs=1e-9)
    assert factor == pytest.approx(1.07457, abs=1e-5)


def test_normalize_area_idempotent(equilateral):
    once = normalize_area(equilateral)
    twice = normalize_area(once)
    for a, b in zip(once.sides, twice.sides):
        assert a == pytest.approx(b, abs=1e-12)


def test_normalize_area_preserves_angles(equilateral):
    unit = normalize_area(equilateral)
    for before, after in zip(equilateral.corner_angles, unit.corner_angles):
        assert before == pytest.approx(after, abs=1e-12)


def test_generate_equilateral_counts(equilateral):
    assert equilateral.num_triangles == 2
    assert equilateral.area == pytest.approx(SQRT3 / 2, abs=1e-12)
    for angle in equilateral.cone_angles:
        assert angle == pytest.approx(2 * math.pi / 3, abs=1e-12)


def test_generate_square_counts(square):
    assert square.num_triangles == 4
    assert square.num_vertices == 4
    assert square.area == pytest.approx(2.0, abs=1e-12)
    for angle in square.cone_angles:
        assert angle == pytest.approx(math.pi, abs=1e-12)


def test_generate_collinear_rejected():
    with pytest.raises(ValueError):
        generate_doubled_polygon([(0, 0), (1, 0), (2, 0)])


def test_generate_clockwise_rejected():
    with pytest.raises(ValueError):
        generate_doubled_polygon([(0, 0), (0, 1), (1, 0)])


def test_serialize_round_trip(corpus):
    for name, s in corpus.items():
        text = serialize_surface(s)
        back = parse_surface(text)
        assert back == s, name
        assert serialize_surface(back) == text, name


def test_require_valid_raises_on_bad_surface():
    s = parse_surface(MIRROR_FSPH.replace("t 1 1.0 1.0 1.0", "t 1 1.0 1.1 1.0"))
    with pytest.raises(InvalidSurfaceError):
        cone_data(s)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(3, 12))
def test_random_doubled_polygons_validate(seed, m):
    rng = random.Random(seed)
    s = generate_doubled_polygon(random_convex_polygon(m, rng))
    report = validate_surface(s)
    assert report.passed
    assert report.gauss_bonnet_residual < 1e-9
    total = math.fsum(p.curvature for p in cone_data(s))
    assert total == pytest.approx(2.0, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(3, 10))
def test_normalize_idempotent_on_random_surfaces(seed, m):
    rng = random.Random(seed)
    s = generate_doubled_polygon(random_convex_polygon(m, rng))
    unit = normalize_area(s)
    assert unit.area == pytest.approx(1.0, abs=1e-12)
    again = normalize_area(unit)
    for a, b in zip(unit.sides, again.sides):
        assert a == pytest.approx(b, rel=1e-12)
    for before, after in zip(s.corner_angles, unit.corner_angles):
        assert before == pytest.approx(after, abs=1e-12)
