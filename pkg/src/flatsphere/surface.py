"""Flat spheres stored as Euclidean triangles glued along edge pairs.

A surface is kept purely metric and combinatorial: each triangle carries its
three side lengths, and a gluing pairs edge slots.  An edge slot ``(t, e)``
is the edge of triangle ``t`` joining corners ``e`` and ``(e + 1) % 3``.
Charts are rebuilt deterministically from side lengths (corner 0 at the
origin, edge 0 along the positive x axis, counterclockwise), so the stored
form never depends on an embedding.  Chart points are complex numbers.

The gluing is orientation reversing: if ``(t1, e1)`` is glued to
``(t2, e2)`` then corner ``e1`` of ``t1`` is identified with corner
``(e2 + 1) % 3`` of ``t2`` and vice versa.  Vertex classes are the orbits
of corner slots under the walk that repeatedly crosses the edge clockwise
of the corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

DEFAULT_TOL = 1e-9

Slot = tuple  # (triangle index, edge index in {0, 1, 2})


class ParseError(ValueError):
    """Malformed fsph input. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class InvalidSurfaceError(ValueError):
    """An operation required a surface that fails validation."""


@dataclass(frozen=True)
class ConePoint:
    """A vertex class with its cone angle and discrete curvature.

    The curvature is k = (2*pi - angle) / (2*pi), always below 1, and the
    curvatures of a sphere sum to 2.
    """

    vertex: int
    angle: float
    curvature: float
    corners: tuple


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    code: str = ""
    offenders: tuple = ()
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Per-invariant pass/fail results plus the Gauss-Bonnet residual."""

    checks: tuple
    gauss_bonnet_residual: float | None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else f"fail ({c.code})"
            lines.append(f"{c.name}={status}")
        if self.gauss_bonnet_residual is not None:
            lines.append(f"gauss_bonnet_residual={self.gauss_bonnet_residual:.3e}")
        return "\n".join(lines)


class ConeSurface:
    """A flat sphere: triangles with side lengths plus an edge-slot gluing.

    Instances are immutable after construction; every derived quantity
    (charts, angles, vertex classes, area) is computed lazily and cached,
    so a surface can be shared freely between threads or processes.
    """

    def __init__(self, sides, gluing):
        self.sides = tuple(
            (float(a), float(b), float(c)) for (a, b, c) in sides
        )
        glue = {}
        for k, v in gluing.items():
            glue[(int(k[0]), int(k[1]))] = (int(v[0]), int(v[1]))
        self.gluing = glue
        self._validation = None

    # -- basic accessors ---------------------------------------------------

    @property
    def num_triangles(self) -> int:
        return len(self.sides)

    def side(self, t: int, e: int) -> float:
        return self.sides[t][e]

    def slots(self):
        for t in range(len(self.sides)):
            for e in range(3):
                yield (t, e)

    def glue(self, slot):
        return self.gluing[slot]

    def __eq__(self, other):
        if not isinstance(other, ConeSurface):
            return NotImplemented
        return self.sides == other.sides and self.gluing == other.gluing

    def __hash__(self):
        return hash((self.sides, tuple(sorted(self.gluing.items()))))

    def __repr__(self):
        return f"ConeSurface({len(self.sides)} triangles)"

    # -- derived geometry --------------------------------------------------

    @cached_property
    def charts(self):
        """Chart corners per triangle: corner 0 at 0, corner 1 at l0 on the
        real axis, corner 2 in the upper half plane."""
        out = []
        for t, (l0, l1, l2) in enumerate(self.sides):
            x = (l0 * l0 + l2 * l2 - l1 * l1) / (2.0 * l0)
            y2 = l2 * l2 - x * x
            if y2 <= 0.0:
                raise InvalidSurfaceError(
                    f"triangle {t} violates the strict triangle inequality"
                )
            out.append((0j, complex(l0, 0.0), complex(x, math.sqrt(y2))))
        return tuple(out)

    @cached_property
    def corner_angles(self):
        """Angles at corners 0, 1, 2 of every triangle (law of cosines)."""
        out = []
        for l0, l1, l2 in self.sides:
            out.append(
                (
                    _corner_angle(l0, l2, l1),
                    _corner_angle(l1, l0, l2),
                    _corner_angle(l2, l1, l0),
                )
            )
        return tuple(out)

    @cached_property
    def triangle_areas(self):
        return tuple(_heron(*s) for s in self.sides)

    @cached_property
    def area(self) -> float:
        return math.fsum(self.triangle_areas)

    @cached_property
    def edges(self):
        """Undirected edges as slot pairs (a, b) with a < b, sorted by a."""
        seen = set()
        out = []
        for slot in self.slots():
            if slot in seen:
                continue
            other = self.gluing.get(slot)
            if other is None or other == slot:
                raise InvalidSurfaceError("gluing is not a complete pairing")
            seen.add(slot)
            seen.add(other)
            out.append((slot, other) if slot < other else (other, slot))
        out.sort()
        return tuple(out)

    @cached_property
    def edge_index(self):
        idx = {}
        for i, (a, b) in enumerate(self.edges):
            idx[a] = i
            idx[b] = i
        return idx

    def edge_length(self, eid: int) -> float:
        (t, e), _ = self.edges[eid]
        return self.sides[t][e]

    @cached_property
    def vertex_classes(self):
        """Orbits of corner slots around vertices, one tuple per vertex.

        Walking from corner (t, c) crosses edge (t, c) into the glued
        triangle; a walk that fails to close up within 3T steps means the
        gluing is inconsistent and raises InvalidSurfaceError.
        """
        limit = 3 * len(self.sides)
        unseen = {(t, c) for t in range(len(self.sides)) for c in range(3)}
        classes = []
        while unseen:
            start = min(unseen)
            orbit = []
            cur = start
            for _ in range(limit + 1):
                orbit.append(cur)
                unseen.discard(cur)
                t, c = cur
                t2, e2 = self.gluing[(t, c)]
                cur = (t2, (e2 + 1) % 3)
                if cur == start:
                    break
            else:
                raise InvalidSurfaceError("vertex walk does not terminate")
            classes.append(tuple(orbit))
        classes.sort(key=lambda orbit: orbit[0])
        return tuple(classes)

    @cached_property
    def vertex_of(self):
        out = {}
        for vid, orbit in enumerate(self.vertex_classes):
            for corner in orbit:
                out[corner] = vid
        return out

    @cached_property
    def cone_angles(self):
        angles = self.corner_angles
        return tuple(
            math.fsum(angles[t][c] for (t, c) in orbit)
            for orbit in self.vertex_classes
        )

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_classes)

    def transition(self, slot):
        """Isometry (rot, off) mapping the chart of the triangle glued to
        ``slot`` into the chart of ``slot``'s triangle, as z -> rot*z + off.

        Orientation reversal of the gluing sends corner e2 of the glued
        triangle onto corner (e+1) of this one.
        """
        t, e = slot
        t2, e2 = self.gluing[slot]
        pa = self.charts[t][e]
        pb = self.charts[t][(e + 1) % 3]
        qa = self.charts[t2][e2]
        qb = self.charts[t2][(e2 + 1) % 3]
        rot = (pa - pb) / (qb - qa)
        rot /= abs(rot)
        off = pb - rot * qa
        return rot, off

    def scaled(self, factor: float) -> "ConeSurface":
        return ConeSurface(
            [(a * factor, b * factor, c * factor) for (a, b, c) in self.sides],
            self.gluing,
        )

    # -- validation hook ---------------------------------------------------

    def require_valid(self, tol: float = DEFAULT_TOL):
        """Validate once and cache; raise InvalidSurfaceError on failure."""
        if self._validation is None:
            self._validation = validate_surface(self, tol)
        if not self._validation.passed:
            codes = ", ".join(c.code or c.name for c in self._validation.failures())
            raise InvalidSurfaceError(f"surface fails validation: {codes}")
        return self._validation


def _corner_angle(a: float, b: float, c: float) -> float:
    """Angle between sides of lengths a, b opposite a side of length c."""
    v = (a * a + b * b - c * c) / (2.0 * a * b)
    return math.acos(max(-1.0, min(1.0, v)))


def _heron(a: float, b: float, c: float) -> float:
    s = 0.5 * (a + b + c)
    q = s * (s - a) * (s - b) * (s - c)
    return math.sqrt(q) if q > 0.0 else 0.0


# -- fsph file format ------------------------------------------------------


def parse_surface(text: str) -> ConeSurface:
    """Parse fsph v1 text into an unvalidated ConeSurface.

    Format: a header line ``fsph 1``, then ``t <index> <len0> <len1> <len2>``
    triangle lines and ``g <t1> <e1> <t2> <e2>`` gluing lines.  ``#`` starts
    a comment; blank lines are ignored.  Raises ParseError with a line
    number on malformed input, duplicate declarations, nonpositive lengths,
    or out-of-range indices.
    """
    triangles = {}
    gluing = {}
    declared = []  # (lineno, slot, slot) kept for the range check
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not header_seen:
            if parts != ["fsph", "1"]:
                raise ParseError(lineno, "expected header 'fsph 1'")
            header_seen = True
            continue
        if parts[0] == "t":
            if len(parts) != 5:
                raise ParseError(lineno, "triangle line needs index and 3 lengths")
            try:
                idx = int(parts[1])
                lengths = tuple(float(x) for x in parts[2:5])
            except ValueError:
                raise ParseError(lineno, "malformed triangle line") from None
            if idx < 0:
                raise ParseError(lineno, f"negative triangle index {idx}")
            if idx in triangles:
                raise ParseError(lineno, f"duplicate triangle index {idx}")
            for length in lengths:
                if not (length > 0.0) or not math.isfinite(length):
                    raise ParseError(lineno, f"nonpositive side length {length!r}")
            triangles[idx] = lengths
        elif parts[0] == "g":
            if len(parts) != 5:
                raise ParseError(lineno, "gluing line needs 4 indices")
            try:
                t1, e1, t2, e2 = (int(x) for x in parts[1:5])
            except ValueError:
                raise ParseError(lineno, "malformed gluing line") from None
            if e1 not in (0, 1, 2) or e2 not in (0, 1, 2):
                raise ParseError(lineno, "edge index out of range")
            a, b = (t1, e1), (t2, e2)
            if a == b:
                raise ParseError(lineno, f"edge slot {a} glued to itself")
            for slot in (a, b):
                if slot in gluing:
                    raise ParseError(lineno, f"edge slot {slot} glued twice")
            gluing[a] = b
            gluing[b] = a
            declared.append((lineno, a, b))
        else:
            raise ParseError(lineno, f"unknown record {parts[0]!r}")
    if not header_seen:
        raise ParseError(1, "missing header 'fsph 1'")
    if not triangles:
        raise ParseError(1, "no triangles declared")
    count = len(triangles)
    if sorted(triangles) != list(range(count)):
        raise ParseError(1, "triangle indices must be 0..T-1 without gaps")
    for lineno, a, b in declared:
        for t, _ in (a, b):
            if t >= count:
                raise ParseError(lineno, f"triangle index {t} out of range")
    return ConeSurface([triangles[i] for i in range(count)], gluing)


def serialize_surface(s: ConeSurface) -> str:
    """Canonical fsph text: triangles in index order, gluings sorted."""
    lines = ["fsph 1"]
    for t, (a, b, c) in enumerate(s.sides):
        lines.append(f"t {t} {a!r} {b!r} {c!r}")
    done = set()
    for slot in sorted(s.gluing):
        if slot in done:
            continue
        other = s.gluing[slot]
        done.add(slot)
        done.add(other)
        lines.append(f"g {slot[0]} {slot[1]} {other[0]} {other[1]}")
    return "\n".join(lines) + "\n"


# -- validation ------------------------------------------------------------


def validate_surface(s: ConeSurface, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check every structural invariant and report per-check results.

    Failures never raise; they become report entries with machine readable
    reason codes.  Checks that depend on a failed prerequisite are reported
    as failed with code ``not-evaluated``.
    """
    checks = []

    bad_len = [
        (t, e)
        for t, sides in enumerate(s.sides)
        for e, length in enumerate(sides)
        if not (length > 0.0 and math.isfinite(length))
    ]
    checks.append(
        CheckResult(
            "positive-lengths",
            not bad_len,
            "" if not bad_len else "nonpositive-length",
            tuple(bad_len),
        )
    )

    bad_tri = []
    for t, (a, b, c) in enumerate(s.sides):
        if not (a < b + c and b < a + c and c < a + b):
            bad_tri.append((t,))
    geometry_ok = not bad_len and not bad_tri
    checks.append(
        CheckResult(
            "triangle-inequality",
            not bad_tri,
            "" if not bad_tri else "triangle-inequality",
            tuple(bad_tri),
        )
    )

    all_slots = set(s.slots())
    glue_bad = []
    for slot in all_slots:
        other = s.gluing.get(slot)
        if other is None:
            glue_bad.append((slot, "unglued"))
        elif other == slot:
            glue_bad.append((slot, "self-glued"))
        elif other not in all_slots:
            glue_bad.append((slot, "dangling"))
        elif s.gluing.get(other) != slot:
            glue_bad.append((slot, "asymmetric"))
    extra = set(s.gluing) - all_slots
    for slot in sorted(extra):
        glue_bad.append((slot, "out-of-range"))
    involution_ok = not glue_bad
    checks.append(
        CheckResult(
            "gluing-involution",
            involution_ok,
            "" if involution_ok else "gluing-involution",
            tuple(slot for slot, _ in glue_bad),
            "; ".join(f"{slot}:{why}" for slot, why in glue_bad[:8]),
        )
    )

    if involution_ok and geometry_ok:
        mismatched = []
        for (t1, e1), (t2, e2) in s.edges:
            a = s.sides[t1][e1]
            b = s.sides[t2][e2]
            if abs(a - b) > tol * max(a, b):
                mismatched.append(((t1, e1), (t2, e2)))
        checks.append(
            CheckResult(
                "glued-lengths-match",
                not mismatched,
                "" if not mismatched else "length-mismatch",
                tuple(mismatched),
            )
        )
    else:
        checks.append(
            CheckResult("glued-lengths-match", False, "not-evaluated")
        )

    if involution_ok:
        seen = {0}
        frontier = [0]
        while frontier:
            t = frontier.pop()
            for e in range(3):
                t2, _ = s.gluing[(t, e)]
                if t2 not in seen:
                    seen.add(t2)
                    frontier.append(t2)
        connected = len(seen) == s.num_triangles
        checks.append(
            CheckResult(
                "connected",
                connected,
                "" if connected else "disconnected",
                tuple((t,) for t in range(s.num_triangles) if t not in seen),
            )
        )
    else:
        checks.append(CheckResult("connected", False, "not-evaluated"))

    vertex_classes = None
    if involution_ok:
        try:
            vertex_classes = s.vertex_classes
        except InvalidSurfaceError:
            checks.append(CheckResult("euler-characteristic", False, "vertex-walk"))
        if vertex_classes is not None:
            f = s.num_triangles
            e = (3 * f) // 2
            v = len(vertex_classes)
            chi = v - e + f
            checks.append(
                CheckResult(
                    "euler-characteristic",
                    chi == 2,
                    "" if chi == 2 else "euler-characteristic",
                    (),
                    f"V-E+F={chi}",
                )
            )
            checks.append(
                CheckResult(
                    "at-least-three-vertices",
                    v >= 3,
                    "" if v >= 3 else "too-few-vertices",
                    (),
                    f"n={v}",
                )
            )
    else:
        checks.append(CheckResult("euler-characteristic", False, "not-evaluated"))
        checks.append(CheckResult("at-least-three-vertices", False, "not-evaluated"))

    residual = None
    if involution_ok and geometry_ok and vertex_classes is not None:
        total = math.fsum(
            (2.0 * math.pi - angle) / (2.0 * math.pi) for angle in s.cone_angles
        )
        residual = abs(total - 2.0)
        checks.append(
            CheckResult(
                "gauss-bonnet",
                residual < 1e-9,
                "" if residual < 1e-9 else "gauss-bonnet",
                (),
                f"|sum k - 2|={residual:.3e}",
            )
        )
    else:
        checks.append(CheckResult("gauss-bonnet", False, "not-evaluated"))

    return ValidationReport(tuple(checks), residual)


# -- cone data and normalization --------------------------------------------


def cone_data(s: ConeSurface) -> list[ConePoint]:
    """One ConePoint per vertex class; the curvatures sum to 2."""
    s.require_valid()
    out = []
    for vid, orbit in enumerate(s.vertex_classes):
        angle = s.cone_angles[vid]
        out.append(
            ConePoint(vid, angle, (2.0 * math.pi - angle) / (2.0 * math.pi), orbit)
        )
    return out


def normalize_area(s: ConeSurface) -> ConeSurface:
    """Rescale all side lengths so the total area becomes 1.

    Idempotent up to floating point, and angle preserving since scaling is
    a similarity.
    """
    s.require_valid()
    area = s.area
    if not (area > 0.0) or not math.isfinite(area):
        raise InvalidSurfaceError(f"cannot normalize, area={area!r}")
    return s.scaled(1.0 / math.sqrt(area))


# -- generators --------------------------------------------------------------


def generate_doubled_polygon(vertices) -> ConeSurface:
    """Double a strictly convex counterclockwise polygon across its boundary.

    The polygon is fan triangulated from vertex 0; the back copy carries the
    mirrored triangles (stored counterclockwise by swapping two corners).
    The cone angle at polygon vertex i is twice its interior angle, and the
    surface area is twice the polygon area.
    """
    pts = [complex(p[0], p[1]) for p in vertices]
    m = len(pts)
    if m < 3:
        raise ValueError("polygon needs at least 3 vertices")
    for i in range(m):
        a, b, c = pts[i], pts[(i + 1) % m], pts[(i + 2) % m]
        cr = _cross(b - a, c - b)
        if cr <= 0.0:
            raise ValueError(
                "vertices must form a strictly convex counterclockwise polygon"
            )

    def dist(i, j):
        return abs(pts[i] - pts[j])

    k = m - 2  # triangles per copy
    sides = []
    for i in range(k):  # front fan triangle (v0, v_{i+1}, v_{i+2})
        sides.append((dist(0, i + 1), dist(i + 1, i + 2), dist(i + 2, 0)))
    for i in range(k):  # back copy (v0, v_{i+2}, v_{i+1})
        sides.append((dist(0, i + 2), dist(i + 2, i + 1), dist(i + 1, 0)))

    front = lambda i: i
    back = lambda i: k + i
    gluing = {}

    def join(a, b):
        gluing[a] = b
        gluing[b] = a

    # interior fan diagonals
    for i in range(k - 1):
        join((front(i), 2), (front(i + 1), 0))
        join((back(i), 0), (back(i + 1), 2))
    # polygon boundary: front slot and back slot per boundary edge (vj, vj+1)
    for j in range(m):
        if j == 0:
            f = (front(0), 0)
        elif j == m - 1:
            f = (front(k - 1), 2)
        else:
            f = (front(j - 1), 1)
        if j == 0:
            g = (back(0), 2)
        elif j == m - 1:
            g = (back(k - 1), 0)
        else:
            g = (back(j - 1), 1)
        join(f, g)
    return ConeSurface(sides, gluing)


def polygon_area(vertices) -> float:
    """Signed area of a planar polygon (positive when counterclockwise)."""
    pts = [complex(p[0], p[1]) for p in vertices]
    m = len(pts)
    return 0.5 * math.fsum(
        _cross(pts[i], pts[(i + 1) % m]) for i in range(m)
    )


def random_convex_polygon(m: int, rng) -> list:
    """m distinct points on the unit circle in angular order.

    Points on a circle are automatically in strictly convex position; a
    minimal angular separation keeps the triangulation well conditioned.
    """
    if m < 3:
        raise ValueError("need at least 3 vertices")
    while True:
        angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(m))
        gaps = [angles[(i + 1) % m] - angles[i] for i in range(m - 1)]
        gaps.append(2.0 * math.pi - (angles[-1] - angles[0]))
        if min(gaps) > 0.05:
            return [(math.cos(a), math.sin(a)) for a in angles]


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real
