"""From quadrant-I conic intersections to full P3P solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import conics
from .errors import (InconsistentInputError, InfeasibleRatioError,
                     InfeasibleTripletError)
from .geometry import (ControlTriangle, RatioPair, SolutionTriplet, ViewAngles,
                       canonical_frame)


@dataclass(frozen=True)
class Solution:
    triplet: SolutionTriplet
    ratio: RatioPair
    repeated: bool


@dataclass(frozen=True, eq=False)
class SolutionSet:
    triangle: ControlTriangle
    angles: ViewAngles
    solutions: tuple[Solution, ...]

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def repeated_flags(self) -> list[bool]:
        return [s.repeated for s in self.solutions]


def constraint_residuals(t: SolutionTriplet, sides, angles: ViewAngles):
    """The three basic-constraint residuals, normalized by (c^2, b^2, a^2)."""
    a, b, c = sides
    ca, cb, cg = angles.cosines
    s1, s2, s3 = t.values
    r_c = (s1 * s1 + s2 * s2 - 2.0 * cg * s1 * s2 - c * c) / (c * c)
    r_b = (s1 * s1 + s3 * s3 - 2.0 * cb * s1 * s3 - b * b) / (b * b)
    r_a = (s2 * s2 + s3 * s3 - 2.0 * ca * s2 * s3 - a * a) / (a * a)
    return (r_c, r_b, r_a)


def triplet_from_ratio(rp: RatioPair, sides, angles: ViewAngles,
                       tol: float = 1e-9) -> SolutionTriplet:
    """Recover (s1, s2, s3) from a quadrant-I ratio point."""
    a, _, _ = sides
    ca = angles.cos_alpha
    u, v = rp.u, rp.v
    if not (u > 0.0 and v > 0.0):
        raise InfeasibleRatioError("ratio point outside quadrant I")
    rad = u * u + v * v - 2.0 * ca * u * v
    if rad <= 0.0:
        raise InfeasibleRatioError("non-positive base-distance radicand")
    s1 = a / math.sqrt(rad)
    t = SolutionTriplet(s1=s1, s2=u * s1, s3=v * s1)
    if max(abs(r) for r in constraint_residuals(t, sides, angles)) > tol:
        raise InconsistentInputError("ratio point violates the basic constraints")
    return t


def solve(tri: ControlTriangle, angles: ViewAngles,
          tol: float = conics.INTERSECT_TOL,
          cluster_tol: float = conics.CLUSTER_TOL) -> SolutionSet:
    """Enumerate all distinct positive solutions of the scene.

    Propagates DegeneratePencilError for cocyclic configurations.
    """
    pair = conics.build_conics(tri.sides, angles)
    inter = conics.intersect_conics(pair, tol=tol, cluster_tol=cluster_tol)
    sols = []
    for rp in conics.quadrant_one_filter(inter):
        try:
            t = triplet_from_ratio(rp, tri.sides, angles, tol=max(tol, 1e-9))
        except InfeasibleRatioError:
            continue
        sols.append(Solution(triplet=t, ratio=rp,
                             repeated=rp.multiplicity >= 2))
    sols.sort(key=lambda s: (s.triplet.s1, s.triplet.s2))
    return SolutionSet(triangle=tri, angles=angles, solutions=tuple(sols))


def recover_centers(t: SolutionTriplet, tri: ControlTriangle):
    """The two mirror-image optical centers at distances (s1, s2, s3).

    Returned in world coordinates, positive-z-in-canonical-frame first.
    """
    frame = canonical_frame(tri)
    a, e, f = frame.a, frame.e, frame.f
    s1, s2, s3 = t.values
    x = (s2 * s2 - s3 * s3 + a * a) / (2.0 * a)
    y = (s2 * s2 - 2.0 * e * x + e * e + f * f - s1 * s1) / (2.0 * f)
    z2 = s2 * s2 - x * x - y * y
    if z2 < -1e-9 * tri.scale ** 2:
        raise InfeasibleTripletError("distances admit no real center")
    z = math.sqrt(max(z2, 0.0))
    up = frame.to_world(np.array([x, y, z]))
    dn = frame.to_world(np.array([x, y, -z]))
    return up, dn
