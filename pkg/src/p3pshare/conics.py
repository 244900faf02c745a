"""The two characteristic conics and their exact intersection.

The solver eliminates v by a resultant in u, finds the real roots of the
resulting quartic via companion-matrix eigenvalues, back-substitutes v and
polishes every candidate with damped Newton on the bivariate system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegeneratePencilError
from .geometry import RatioPair, ViewAngles

#: default acceptance residual for polished intersection points
INTERSECT_TOL = 1e-9
#: default clustering threshold deciding "repeated" (coefficient-scaled)
CLUSTER_TOL = 1e-7
#: second-singular-value threshold for the degenerate-pencil test
PENCIL_RANK_TOL = 1e-10


@dataclass(frozen=True)
class Conic:
    """F(u, v) = c_vv v^2 + c_uv uv + c_uu u^2 + c_u u + c_v v + c_1."""

    c_vv: float
    c_uv: float
    c_uu: float
    c_u: float
    c_v: float
    c_1: float

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([self.c_vv, self.c_uv, self.c_uu,
                         self.c_u, self.c_v, self.c_1])

    def __call__(self, u, v):
        return (self.c_vv * v * v + self.c_uv * u * v + self.c_uu * u * u
                + self.c_u * u + self.c_v * v + self.c_1)

    def gradient(self, u: float, v: float) -> np.ndarray:
        return np.array([self.c_uv * v + 2.0 * self.c_uu * u + self.c_u,
                         2.0 * self.c_vv * v + self.c_uv * u + self.c_v])

    def scaled(self) -> "Conic":
        """Same zero set, coefficients normalized to unit max norm."""
        m = float(np.max(np.abs(self.coeffs)))
        if m == 0.0:
            raise DegeneratePencilError("zero conic")
        return Conic(*(self.coeffs / m))


@dataclass(frozen=True)
class ConicPair:
    C1: Conic
    C2: Conic
    sides: tuple[float, float, float]
    angles: ViewAngles


@dataclass(frozen=True)
class IntersectionSet:
    points: tuple[RatioPair, ...]
    all_real: int


def build_conics(sides: tuple[float, float, float], angles: ViewAngles) -> ConicPair:
    """The two characteristic conics of the scene (u = s2/s1, v = s3/s1)."""
    a, b, c = sides
    ca, cb, cg = angles.cosines
    a2, b2, c2 = a * a, b * b, c * c
    C1 = Conic(c_vv=a2 - b2, c_uv=2.0 * b2 * ca, c_uu=-b2,
               c_u=0.0, c_v=-2.0 * a2 * cb, c_1=a2)
    C2 = Conic(c_vv=-c2, c_uv=2.0 * c2 * ca, c_uu=a2 - c2,
               c_u=-2.0 * a2 * cg, c_v=0.0, c_1=a2)
    return ConicPair(C1=C1, C2=C2, sides=(a, b, c), angles=angles)


def difference_conic(pair: ConicPair) -> Conic:
    """C2 - C1; every common point of the pair lies on it."""
    d = pair.C2.coeffs - pair.C1.coeffs
    return Conic(*d)


def newton_polish(F1: Conic, F2: Conic, u: float, v: float,
                  tol: float = 1e-13, max_iter: int = 50):
    """Damped Newton on (F1, F2) = 0; returns (u, v, residual)."""
    p = np.array([u, v])

    def res(q):
        return max(abs(F1(q[0], q[1])), abs(F2(q[0], q[1])))

    best = p.copy()
    best_r = res(p)
    for _ in range(max_iter):
        if best_r < tol:
            break
        J = np.vstack([F1.gradient(*p), F2.gradient(*p)])
        F = np.array([F1(*p), F2(*p)])
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -F, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            break
        # backtracking keeps the iteration from overshooting near tangency
        lam = 1.0
        improved = False
        for _ in range(8):
            q = p + lam * step
            r = res(q)
            if r < best_r:
                p, best, best_r, improved = q, q.copy(), r, True
                break
            lam *= 0.5
        if not improved:
            break
    return float(best[0]), float(best[1]), best_r


def _v_poly(conic: Conic):
    """Coefficients of the conic as a quadratic in v (each poly in u, low-first)."""
    A = np.array([conic.c_vv])
    B = np.array([conic.c_v, conic.c_uv])
    D = np.array([conic.c_1, conic.c_u, conic.c_uu])
    return A, B, D


def resultant_in_u(F1: Conic, F2: Conic) -> np.ndarray:
    """Degree<=4 polynomial in u (low-first) eliminating v from the pair."""
    A1, B1, D1 = _v_poly(F1)
    A2, B2, D2 = _v_poly(F2)
    T1 = P.polysub(P.polymul(A1, D2), P.polymul(A2, D1))
    T2 = P.polysub(P.polymul(A1, B2), P.polymul(A2, B1))
    T3 = P.polysub(P.polymul(B1, D2), P.polymul(B2, D1))
    r = P.polysub(P.polymul(T1, T1), P.polymul(T2, T3))
    out = np.zeros(5)
    out[:len(r)] = r
    return out


def _quad_roots(a2: float, a1: float, a0: float, scale: float):
    """Real roots of a2 x^2 + a1 x + a0, degenerating gracefully."""
    m = max(abs(a2), abs(a1), abs(a0))
    if m == 0.0:
        return None  # identically zero
    if abs(a2) <= 1e-13 * m:
        if abs(a1) <= 1e-13 * m:
            return []
        return [-a0 / a1]
    disc = a1 * a1 - 4.0 * a2 * a0
    band = 1e-12 * max(a1 * a1, abs(4.0 * a2 * a0), m * m * scale * scale)
    if disc < -band:
        return []
    disc = max(disc, 0.0)
    sq = np.sqrt(disc)
    q = -0.5 * (a1 + np.copysign(sq, a1)) if a1 != 0.0 else 0.5 * sq
    if q == 0.0:
        return [0.0, 0.0]
    r1 = q / a2
    r2 = a0 / q
    return [r1, r2]


def _v_candidates(F1: Conic, F2: Conic, u0: float) -> list[float]:
    """Common v roots of the two conics at fixed u."""
    A1, B1, D1 = _v_poly(F1)
    A2, B2, D2 = _v_poly(F2)
    b1 = P.polyval(u0, B1)
    d1 = P.polyval(u0, D1)
    b2 = P.polyval(u0, B2)
    d2 = P.polyval(u0, D2)
    a1 = A1[0]
    a2 = A2[0]
    scale = 1.0 + abs(u0)
    # linear elimination of v^2 gives v directly when non-degenerate; near a
    # double u-root the denominator degenerates, so the per-conic quadratic
    # roots are always offered too and the residual gate arbitrates
    out = []
    den = a2 * b1 - a1 * b2
    num = a1 * d2 - a2 * d1
    if abs(den) > 1e-8 * scale * max(abs(a1), abs(a2), abs(b1), abs(b2), 1e-30):
        out.append(num / den)
    r1 = _quad_roots(a1, b1, d1, scale)
    r2 = _quad_roots(a2, b2, d2, scale)
    if r1 is None and r2 is None:
        return out
    if r1 is None:
        return out + list(r2)
    if r2 is None:
        return out + list(r1)
    matched = []
    for x in r1:
        for y in r2:
            if abs(x - y) <= 1e-4 * (1.0 + abs(x)):
                matched.append(0.5 * (x + y))
    if not matched:
        matched = list(r1) + list(r2)
    return out + matched


def _cluster_scalars(values: np.ndarray, tol: float) -> list[tuple[float, int]]:
    """Greedy 1D clustering on absolute gaps; (representative, count) pairs."""
    out: list[list[float]] = []
    for x in np.sort(values):
        if out and abs(x - out[-1][0]) <= tol:
            out[-1].append(x)
        else:
            out.append([x])
    return [(float(np.mean(c)), len(c)) for c in out]


def _tangency_score(F1: Conic, F2: Conic, u: float, v: float) -> float:
    """Small when the two gradients are parallel (conics tangent)."""
    g1 = F1.gradient(u, v)
    g2 = F2.gradient(u, v)
    n = np.linalg.norm(g1) * np.linalg.norm(g2)
    if n == 0.0:
        return 0.0
    return abs(g1[0] * g2[1] - g1[1] * g2[0]) / n


def intersect_conics(pair: ConicPair, tol: float = INTERSECT_TOL,
                     cluster_tol: float = CLUSTER_TOL) -> IntersectionSet:
    """All real intersections of the pair, with root multiplicities.

    Raises DegeneratePencilError for proportional conics or an identically
    vanishing resultant (the cocyclic configuration).
    """
    F1 = pair.C1.scaled()
    F2 = pair.C2.scaled()
    M = np.vstack([F1.coeffs, F2.coeffs])
    M = M / np.linalg.norm(M, axis=1, keepdims=True)
    if np.linalg.svd(M, compute_uv=False)[1] < PENCIL_RANK_TOL:
        raise DegeneratePencilError("proportional conic pair")

    r = resultant_in_u(F1, F2)
    rmax = float(np.max(np.abs(r)))
    if rmax < 1e-14:
        raise DegeneratePencilError("identically zero resultant")
    r = r / rmax
    nz = np.nonzero(np.abs(r) > 1e-13)[0]
    r = r[: nz[-1] + 1]
    if len(r) < 2:
        return IntersectionSet(points=(), all_real=0)
    roots = P.Polynomial(r).roots()
    # double roots perturb by the square root of the coefficient noise, so
    # near-real acceptance needs a floor; the residual gate after polishing
    # rejects genuinely complex roots that slip through
    imag_tol = max(cluster_tol, 1e-5)
    real_u = [float(z.real) for z in roots
              if abs(z.imag) <= imag_tol * (1.0 + abs(z.real))]

    points: list[RatioPair] = []
    for u0, mult in _cluster_scalars(np.array(real_u), cluster_tol):
        cands = []
        for v0 in _v_candidates(F1, F2, u0):
            uu, vv, res = newton_polish(F1, F2, u0, v0)
            if res <= tol * (1.0 + uu * uu + vv * vv):
                cands.append((uu, vv))
        # dedupe v candidates that polished to the same point
        uniq: list[tuple[float, float]] = []
        for uu, vv in cands:
            if not any(abs(uu - a) <= cluster_tol * (1.0 + abs(a))
                       and abs(vv - b) <= cluster_tol * (1.0 + abs(b))
                       for a, b in uniq):
                uniq.append((uu, vv))
        if not uniq:
            continue
        k = len(uniq)
        if k >= mult:
            ms = [1] * k
        elif k == 1:
            ms = [mult]
        else:
            # distribute the excess multiplicity to the most tangential point
            ms = [1] * k
            scores = [_tangency_score(F1, F2, uu, vv) for uu, vv in uniq]
            ms[int(np.argmin(scores))] += mult - k
        for (uu, vv), m in zip(uniq, ms):
            points.append(RatioPair(u=uu, v=vv, multiplicity=m))

    # global dedupe across u clusters; a point re-found from two clusters
    # means an over-split root, so keep the larger multiplicity, not the sum
    merged: list[RatioPair] = []
    for p in sorted(points, key=lambda q: (q.u, q.v)):
        hit = None
        for i, q in enumerate(merged):
            if (abs(p.u - q.u) <= cluster_tol * (1.0 + abs(q.u))
                    and abs(p.v - q.v) <= cluster_tol * (1.0 + abs(q.v))):
                hit = i
                break
        if hit is None:
            merged.append(p)
        else:
            q = merged[hit]
            merged[hit] = RatioPair(u=q.u, v=q.v,
                                    multiplicity=max(q.multiplicity,
                                                     p.multiplicity))

    total = sum(p.multiplicity for p in merged)
    if total > 4:
        # cannot exceed the Bezout bound; clamp conservatively
        merged = [RatioPair(p.u, p.v, 1) for p in merged][:4]
        total = len(merged)
    return IntersectionSet(points=tuple(merged), all_real=total)


def quadrant_one_filter(inter: IntersectionSet, eps: float = 1e-10) -> list[RatioPair]:
    """Points with u > eps and v > eps."""
    return [p for p in inter.points if p.u > eps and p.v > eps]


def tangency_flags(inter: IntersectionSet) -> list[bool]:
    """True for points with multiplicity >= 2 (repeated P3P solutions)."""
    return [p.multiplicity >= 2 for p in inter.points]
