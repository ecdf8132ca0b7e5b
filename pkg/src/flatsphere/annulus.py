"""Closed-form model of the flat annulus A(R, R', theta).

The annulus is the circular ring {R <= |z| <= R'} of a sector of apex
angle theta with its two radial sides identified by the rotation of angle
theta; theta > 2*pi is allowed (covering construction).  Trajectories fall
into three regimes depending on the start boundary and the angle alpha
they make with the radial leaf, and a trajectory returning to the outer
boundary self-intersects exactly floor((pi - 2*alpha) / theta) times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INNER = "inner"
OUTER = "outer"

REGIME_INNER_START = "inner-start"
REGIME_EXITS_INNER = "outer-exits-inner"
REGIME_RETURNS_OUTER = "outer-returns-outer"


@dataclass(frozen=True)
class AnnulusSpec:
    """Flat annulus with inner radius R, outer radius Rp, apex angle theta."""

    R: float
    Rp: float
    theta: float

    def __post_init__(self):
        if not (self.R >= 0.0 and self.Rp > self.R):
            raise ValueError(f"need 0 <= R < Rp, got R={self.R}, Rp={self.Rp}")
        if not self.theta > 0.0:
            raise ValueError(f"apex angle must be positive, got {self.theta}")


@dataclass(frozen=True)
class AnnulusTrajectoryReport:
    regime: str
    min_radius: float
    exit_boundary: str
    self_intersections: int | None
    chord_central_angle: float | None

    def __str__(self):
        lines = [
            f"regime={self.regime}",
            f"min_radius={self.min_radius:.12g}",
            f"exit_boundary={self.exit_boundary}",
        ]
        if self.self_intersections is not None:
            lines.append(f"self_intersections={self.self_intersections}")
        if self.chord_central_angle is not None:
            lines.append(f"chord_central_angle={self.chord_central_angle:.12g}")
        return "\n".join(lines)


def modulus(a: AnnulusSpec) -> float:
    """Conformal modulus ln(Rp/R) / theta; undefined for a cone (R = 0)."""
    if a.R == 0.0:
        raise ValueError("modulus is infinite for R = 0 (degenerate cone)")
    return math.log(a.Rp / a.R) / a.theta


def classify_trajectory(a: AnnulusSpec, start: str, alpha: float) -> AnnulusTrajectoryReport:
    """Regime of a trajectory entering at angle alpha from the radial leaf.

    From the inner boundary the radius increases monotonically, so the
    trajectory is simple and leaves through the outer boundary.  From the
    outer boundary the threshold is sin(alpha) <= R/Rp: at or below it the
    radius decreases all the way to R (exits inner, simple); above it the
    radius dips to Rp*sin(alpha) and climbs back (returns outer, possibly
    self-intersecting).  The tangent case counts as exits-inner.
    """
    if not -1e-15 <= alpha <= math.pi / 2.0 + 1e-15:
        raise ValueError(f"alpha must lie in [0, pi/2], got {alpha}")
    alpha = min(max(alpha, 0.0), math.pi / 2.0)
    if start == INNER:
        return AnnulusTrajectoryReport(
            REGIME_INNER_START, a.R, OUTER, None, None
        )
    if start != OUTER:
        raise ValueError(f"start must be 'inner' or 'outer', got {start!r}")
    if math.sin(alpha) <= a.R / a.Rp:
        return AnnulusTrajectoryReport(
            REGIME_EXITS_INNER, a.R, INNER, None, None
        )
    return AnnulusTrajectoryReport(
        REGIME_RETURNS_OUTER,
        a.Rp * math.sin(alpha),
        OUTER,
        annulus_self_intersections(a, alpha),
        math.pi - 2.0 * alpha,
    )


def annulus_self_intersections(a: AnnulusSpec, alpha: float) -> int:
    """floor((pi - 2*alpha) / theta) for an outer-returning trajectory.

    Only defined in the returning regime sin(alpha) > R/Rp.  The quotient
    is snapped to the nearest integer when within 1e-9 of one, since exact
    boundary configurations (the chord ending on the start point's leaf)
    land there up to floating point noise.
    """
    if not 0.0 < alpha <= math.pi / 2.0 + 1e-15:
        raise ValueError(f"alpha must lie in (0, pi/2], got {alpha}")
    if not math.sin(alpha) > a.R / a.Rp:
        raise ValueError(
            "trajectory exits through the inner boundary; "
            "self-intersection count needs the returning regime"
        )
    return _floor_snap((math.pi - 2.0 * alpha) / a.theta)


def annulus_sc_lower_bound(a: AnnulusSpec) -> float:
    """arccos(R/Rp) / theta.

    When the annulus embeds in a flat sphere with one singularity on each
    boundary arc sharing a radial leaf, this many simple saddle
    connections exist inside the annulus.
    """
    return math.acos(a.R / a.Rp) / a.theta


def monogon_family_annulus(alpha: float, length: float, family_length: float) -> AnnulusSpec:
    """Annulus swept by a family of parallel geodesic monogons.

    A monogon of interior angle alpha and length L embeds in a family of
    disjoint monogons with lengths up to L'; once L'/L > 1/sin(alpha/2)
    the swept region contains the flat annulus with

        theta = pi - alpha,  R = L / (2 cos(alpha/2)),  Rp = L' tan(alpha/2) / 2.
    """
    if not 0.0 < alpha < math.pi:
        raise ValueError(f"interior angle must lie in (0, pi), got {alpha}")
    if not (length > 0.0 and family_length > 0.0):
        raise ValueError("lengths must be positive")
    if not family_length / length > 1.0 / math.sin(alpha / 2.0):
        raise ValueError(
            "family too short to contain an annulus: "
            f"L'/L = {family_length / length:.6g} <= 1/sin(alpha/2) = "
            f"{1.0 / math.sin(alpha / 2.0):.6g}"
        )
    return AnnulusSpec(
        R=length / (2.0 * math.cos(alpha / 2.0)),
        Rp=family_length * math.tan(alpha / 2.0) / 2.0,
        theta=math.pi - alpha,
    )


def _floor_snap(x: float, tol: float = 1e-9) -> int:
    m = math.floor(x)
    if x - m > 1.0 - tol:
        m += 1
    return m
