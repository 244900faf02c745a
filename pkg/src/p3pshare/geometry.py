"""Core types: control triangles, canonical frames, viewing angles, triplets.

All quantities are double precision. Cosines are the stored angle
primitives throughout; angles in radians/degrees appear only in reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAngleError, DegenerateInputError

#: relative tolerance for exact-construction consistency checks
EXACT_TOL = 1e-12
#: default relative tolerance for residual acceptance
RESIDUAL_TOL = 1e-9


def _as_point(p) -> np.ndarray:
    q = np.asarray(p, dtype=float)
    if q.shape != (3,):
        raise DegenerateInputError(f"expected a 3D point, got shape {q.shape}")
    return q


@dataclass(frozen=True, eq=False)
class ControlTriangle:
    """The three control points with side lengths and interior-angle cosines.

    Sides follow the opposite-vertex convention: a = |BC|, b = |AC|, c = |AB|.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    a: float
    b: float
    c: float
    cos_A: float  # cos(angle BAC)
    cos_B: float  # cos(angle ABC)
    cos_C: float  # cos(angle ACB)

    @classmethod
    def from_points(cls, A, B, C) -> "ControlTriangle":
        A, B, C = _as_point(A), _as_point(B), _as_point(C)
        a = float(np.linalg.norm(C - B))
        b = float(np.linalg.norm(C - A))
        c = float(np.linalg.norm(B - A))
        scale = max(a, b, c)
        if scale <= 0.0 or min(a, b, c) <= 0.0:
            raise DegenerateInputError("coincident control points")
        area2 = float(np.linalg.norm(np.cross(C - B, A - B)))
        if area2 <= 1e-12 * scale * scale:
            raise DegenerateInputError("collinear control points")
        if a + b <= c or b + c <= a or c + a <= b:
            raise DegenerateInputError("triangle inequality violated")
        cos_A = (b * b + c * c - a * a) / (2.0 * b * c)
        cos_B = (a * a + c * c - b * b) / (2.0 * a * c)
        cos_C = (a * a + b * b - c * c) / (2.0 * a * b)
        return cls(A=A, B=B, C=C, a=a, b=b, c=c,
                   cos_A=cos_A, cos_B=cos_B, cos_C=cos_C)

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def scale(self) -> float:
        return max(self.a, self.b, self.c)

    @property
    def points(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.A, self.B, self.C)


def interior_angles(tri: ControlTriangle) -> tuple[float, float, float]:
    """Cosines of the interior angles (at A, B, C) by the law of cosines."""
    return (tri.cos_A, tri.cos_B, tri.cos_C)


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    """Rigid map to the frame B=(0,0,0), C=(a,0,0), A=(e,f,0) with f > 0.

    ``to_canonical(p) = rotation @ p + translation``.
    """

    a: float
    e: float
    f: float
    rotation: np.ndarray
    translation: np.ndarray

    def to_canonical(self, p) -> np.ndarray:
        return self.rotation @ _as_point(p) + self.translation

    def to_world(self, p) -> np.ndarray:
        return self.rotation.T @ (_as_point(p) - self.translation)


def canonical_frame(tri: ControlTriangle) -> CanonicalFrame:
    """Canonical frame of a triangle; raises on degenerate input.

    e = (a^2 + c^2 - b^2) / (2a) and f = +sqrt(c^2 - e^2) by construction.
    """
    ex = (tri.C - tri.B) / tri.a
    n = np.cross(tri.C - tri.B, tri.A - tri.B)
    nn = float(np.linalg.norm(n))
    if nn <= 1e-12 * tri.scale ** 2:
        raise DegenerateInputError("collinear control points")
    ez = n / nn
    ey = np.cross(ez, ex)
    rotation = np.vstack([ex, ey, ez])
    translation = -rotation @ tri.B
    d = tri.A - tri.B
    e = float(d @ ex)
    f = float(d @ ey)
    return CanonicalFrame(a=tri.a, e=e, f=f,
                          rotation=rotation, translation=translation)


def circumcircle_2d(frame: CanonicalFrame) -> tuple[float, float, float]:
    """Circumcenter (cx, cy) and circumradius of the canonical triangle."""
    cx = frame.a / 2.0
    cy = (frame.e ** 2 - frame.a * frame.e + frame.f ** 2) / (2.0 * frame.f)
    return cx, cy, math.hypot(cx, cy)


@dataclass(frozen=True)
class ViewAngles:
    """Cosines of the subtended angles at the optical center.

    alpha is the angle between rays OB and OC (opposite side a), beta
    between OA and OC, gamma between OA and OB.
    """

    cos_alpha: float
    cos_beta: float
    cos_gamma: float

    def __post_init__(self):
        cos = (self.cos_alpha, self.cos_beta, self.cos_gamma)
        for x in cos:
            if not -1.0 < x < 1.0:
                raise DegenerateAngleError(f"cosine {x} outside (-1, 1)")
        al, be, ga = (math.acos(x) for x in cos)
        if al + be + ga >= 2.0 * math.pi:
            raise DegenerateAngleError("angle sum >= 2*pi")
        if al >= be + ga or be >= al + ga or ga >= al + be:
            raise DegenerateAngleError("spherical triangle inequality violated")

    @property
    def cosines(self) -> tuple[float, float, float]:
        return (self.cos_alpha, self.cos_beta, self.cos_gamma)


def view_angles_from_center(tri: ControlTriangle, O) -> ViewAngles:
    """Subtended-angle cosines seen from the optical center O."""
    O = _as_point(O)
    rays = [tri.A - O, tri.B - O, tri.C - O]
    norms = [float(np.linalg.norm(r)) for r in rays]
    if min(norms) <= 1e-15 * tri.scale:
        raise DegenerateInputError("optical center coincides with a control point")
    rA, rB, rC = (r / n for r, n in zip(rays, norms))

    def cosang(x, y):
        c = float(x @ y)
        if abs(c) >= 1.0 - 1e-12:
            raise DegenerateAngleError("subtended angle at 0 or pi")
        return c

    return ViewAngles(cos_alpha=cosang(rB, rC),
                      cos_beta=cosang(rA, rC),
                      cos_gamma=cosang(rA, rB))


def cocyclic_degeneracy(tri: ControlTriangle, O) -> float:
    """Distance of O from the circumcircle of ABC (in-plane and out-of-plane).

    Zero iff O lies on the circumcircle within the base plane.
    """
    frame = canonical_frame(tri)
    x, y, z = frame.to_canonical(O)
    cx, cy, r = circumcircle_2d(frame)
    dr = math.hypot(x - cx, y - cy) - r
    return math.hypot(dr, z)


@dataclass(frozen=True)
class SolutionTriplet:
    """Positive distances (|OA|, |OB|, |OC|)."""

    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        if not (self.s1 > 0.0 and self.s2 > 0.0 and self.s3 > 0.0):
            raise DegenerateInputError("solution triplet must be positive")

    @property
    def values(self) -> tuple[float, float, float]:
        return (self.s1, self.s2, self.s3)


@dataclass(frozen=True)
class RatioPair:
    """A candidate conic intersection (u, v) = (s2/s1, s3/s1)."""

    u: float
    v: float
    multiplicity: int = 1
