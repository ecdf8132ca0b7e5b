"""Flat spheres with conical singularities.

Surfaces are Euclidean triangles glued along edge pairs; the package
computes discrete curvature and the curvature gap, Delaunay flips, traced
geodesics and their self-intersections, exhaustive saddle connection
enumeration, normal coordinates of simple paths, and verifies the
quantitative bounds that a positive curvature gap imposes.
"""

from .annulus import (
    AnnulusSpec,
    AnnulusTrajectoryReport,
    annulus_sc_lower_bound,
    annulus_self_intersections,
    classify_trajectory,
    modulus,
    monogon_family_annulus,
)
from .bounds import (
    BoundsReport,
    VerificationReport,
    ZeroGapError,
    compute_bounds,
    verify_surface,
)
from .curvature import (
    CurvatureProfile,
    cubic_case_check,
    curvature_gap,
    sharp_family_curvatures,
)
from .delaunay import (
    FlipReport,
    check_edge_length_bound,
    cone_graph_diameter,
    delaunayize,
    is_locally_delaunay,
)
from .geodesic import (
    EnumerationResult,
    PointAnchor,
    SaddleConnection,
    Trajectory,
    VertexAnchor,
    combinatorial_length,
    count_self_intersections,
    enumerate_saddle_connections,
    extract_monogons,
    per_triangle_crossings,
    trace,
)
from .normalcoords import (
    InadmissibleCoordinateError,
    NormalCoordinate,
    decode_normal,
    encode_normal,
    weak_composition_count,
)
from .surface import (
    ConePoint,
    ConeSurface,
    InvalidSurfaceError,
    ParseError,
    ValidationReport,
    cone_data,
    generate_doubled_polygon,
    normalize_area,
    parse_surface,
    serialize_surface,
    validate_surface,
)

__all__ = [
    "AnnulusSpec",
    "AnnulusTrajectoryReport",
    "BoundsReport",
    "ConePoint",
    "ConeSurface",
    "CurvatureProfile",
    "EnumerationResult",
    "FlipReport",
    "InadmissibleCoordinateError",
    "InvalidSurfaceError",
    "NormalCoordinate",
    "ParseError",
    "PointAnchor",
    "SaddleConnection",
    "Trajectory",
    "ValidationReport",
    "VerificationReport",
    "VertexAnchor",
    "ZeroGapError",
    "annulus_sc_lower_bound",
    "annulus_self_intersections",
    "check_edge_length_bound",
    "classify_trajectory",
    "combinatorial_length",
    "compute_bounds",
    "cone_data",
    "cone_graph_diameter",
    "count_self_intersections",
    "cubic_case_check",
    "curvature_gap",
    "decode_normal",
    "delaunayize",
    "encode_normal",
    "enumerate_saddle_connections",
    "extract_monogons",
    "generate_doubled_polygon",
    "is_locally_delaunay",
    "modulus",
    "monogon_family_annulus",
    "normalize_area",
    "parse_surface",
    "per_triangle_crossings",
    "serialize_surface",
    "sharp_family_curvatures",
    "trace",
    "validate_surface",
    "verify_surface",
    "weak_composition_count",
]

__version__ = "0.1.0"
