"""Curvature gap of a multiset of discrete curvatures.

The gap of a flat sphere is the minimum over all subsets I of its cone
points of |1 - sum_{i in I} k_i|, including the empty and full subsets.
It measures how far the curvatures are from splitting into two halves of
total curvature 1 each; a positive gap rules out simple closed geodesics
and flat cylinders.  Any flat sphere has gap at most 1/3, with equality
exactly when every cone angle lies in 2*pi + (4*pi/3) * Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_POINTS = 30
_CHUNK_BITS = 20


class GapBudgetError(ValueError):
    """Too many cone points for exhaustive subset enumeration."""


def curvature_gap(curvatures, max_points: int = MAX_POINTS) -> float:
    """Exact minimum of |1 - subset sum| over all 2^n subsets.

    Exhaustive by design: n stays desk scale, and the enumeration doubles
    as its own certificate.  Splits the subsets into numpy chunks of at
    most 2^20 so memory stays bounded up to the n <= 30 cap.  Requires the
    curvatures to sum to 2 (within 1e-9) with every entry below 1.
    """
    ks = [float(k) for k in curvatures]
    n = len(ks)
    if n == 0:
        raise ValueError("empty curvature multiset")
    if n > max_points:
        raise GapBudgetError(f"n={n} exceeds the exhaustive budget {max_points}")
    total = math.fsum(ks)
    if abs(total - 2.0) > 1e-9:
        raise ValueError(f"curvatures sum to {total!r}, expected 2")
    if any(k >= 1.0 for k in ks):
        raise ValueError("every discrete curvature must be below 1")

    low = ks[: min(n, _CHUNK_BITS)]
    high = ks[min(n, _CHUNK_BITS):]
    sums = np.zeros(1)
    for k in low:
        sums = np.concatenate([sums, sums + k])
    best = float(np.abs(1.0 - sums).min())
    for mask in range(1, 1 << len(high)):
        offset = 0.0
        for i, k in enumerate(high):
            if mask >> i & 1:
                offset += k
        best = min(best, float(np.abs(1.0 - (sums + offset)).min()))
    return best


def cubic_case_check(angles, tol: float = 1e-9) -> bool:
    """True iff every angle is 2*pi + (4*pi/3)*m for an integer m >= -1.

    This is the equality case of the gap bound: profiles passing this test
    have curvature gap exactly 1/3 (they are the flat metrics induced by
    cubic differentials).
    """
    step = 4.0 * math.pi / 3.0
    for theta in angles:
        if not theta > 0.0:
            raise ValueError(f"cone angle must be positive, got {theta!r}")
        m = round((theta - 2.0 * math.pi) / step)
        if m < -1 or abs(theta - (2.0 * math.pi + step * m)) > tol:
            return False
    return True


@dataclass(frozen=True, init=False)
class CurvatureProfile:
    """A curvature multiset with its derived gap."""

    curvatures: tuple

    def __init__(self, curvatures):
        object.__setattr__(
            self, "curvatures", tuple(float(k) for k in curvatures)
        )

    @property
    def n(self) -> int:
        return len(self.curvatures)

    @cached_property
    def gap(self) -> float:
        return curvature_gap(self.curvatures)

    @classmethod
    def of_surface(cls, surface) -> "CurvatureProfile":
        from .surface import cone_data

        return cls([p.curvature for p in cone_data(surface)])


def sharp_family_curvatures(m: int, eps: float) -> list:
    """Curvature multiset of the sharp diameter example: m cones of
    curvature eps, m-1 of curvature -eps and two of curvature 1 - eps/2.
    For eps < 2/(2m+1) its gap is exactly eps/2."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0.0 < eps < 2.0 / (2 * m + 1):
        raise ValueError("need 0 < eps < 2/(2m+1)")
    return [eps] * m + [-eps] * (m - 1) + [1.0 - eps / 2.0] * 2
