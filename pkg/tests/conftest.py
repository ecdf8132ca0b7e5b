import math

import pytest

from flatsphere.cli import generate_surface
from flatsphere.surface import generate_doubled_polygon

SQRT3 = math.sqrt(3.0)


def make_equilateral():
    return generate_doubled_polygon([(0, 0), (1, 0), (0.5, SQRT3 / 2)])


def make_square():
    return generate_doubled_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def make_right306090():
    # doubled right triangle with angles pi/2, pi/3, pi/6
    return generate_doubled_polygon([(0, 0), (1, 0), (0, SQRT3)])


def make_obtuse():
    return generate_doubled_polygon([(0, 0), (1, 0), (0.5, 0.2)])


def make_pentagon():
    return generate_surface(seed=7, vertices=5, min_gap=0.05)


def make_hexagon():
    return generate_surface(seed=11, vertices=6, min_gap=0.05)


def make_thin_wedge(side=10.0, apex=math.pi / 10):
    # doubled isoceles triangle: cone of angle 2*apex at the origin vertex
    h = apex / 2
    return generate_doubled_polygon(
        [
            (0, 0),
            (side * math.cos(-h), side * math.sin(-h)),
            (side * math.cos(h), side * math.sin(h)),
        ]
    )


CORPUS_FACTORIES = {
    "equilateral": make_equilateral,
    "square": make_square,
    "right306090": make_right306090,
    "obtuse": make_obtuse,
    "pentagon": make_pentagon,
    "hexagon": make_hexagon,
}

# surfaces with a positive curvature gap (the doubled square has gap 0)
GAP_CORPUS_NAMES = ["equilateral", "right306090", "obtuse", "pentagon", "hexagon"]


@pytest.fixture(scope="session")
def corpus():
    return {name: make() for name, make in CORPUS_FACTORIES.items()}


@pytest.fixture(scope="session")
def equilateral():
    return make_equilateral()


@pytest.fixture(scope="session")
def square():
    return make_square()


@pytest.fixture(scope="session")
def obtuse():
    return make_obtuse()


@pytest.fixture(scope="session")
def pentagon():
    return make_pentagon()


@pytest.fixture(scope="session")
def thin_wedge():
    return make_thin_wedge()
