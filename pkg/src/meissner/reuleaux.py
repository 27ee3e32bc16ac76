"""Reuleaux polygons of width 1 in the plane z = 0.

A Reuleaux polygon here is an odd-count list of vertices in counterclockwise
boundary order; the boundary arc that follows vertex i is the unit-radius arc
centered at the opposite vertex i + (n+1)/2 (mod n).  The module provides the
regular family, a seeded random generator built on the rotating-diameter
construction, exact support evaluation, and a validator that reports every
structural invariant with its worst residual.

Random generation samples the n arc angles from a Dirichlet distribution,
then Newton-projects them onto the closure manifold of the rotating-diameter
construction (closing the boundary imposes two extra scalar constraints on
top of the angle sum pi).  Validity is enforced a posteriori by ``validate``;
generation retries with fresh draws until it passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EvenOrTooSmallN, GeometryError
from .geom import EQ_TOL, TWO_PI, wrap_angle

MIN_ARC_ANGLE = 0.05  # reject near-degenerate arcs; keeps the Voronoi step well conditioned
MAX_GENERATION_ATTEMPTS = 100


@dataclass(frozen=True)
class ReuleauxPolygon:
    """Vertices of a width-1 Reuleaux polygon in counterclockwise order."""

    vertices: np.ndarray  # (n, 2)

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float))

    @property
    def n(self):
        return len(self.vertices)

    def opposite(self, i):
        """Index of the vertex centering the boundary arc from vertex i to i+1."""
        return (i + (self.n + 1) // 2) % self.n

    def arc_center_index(self, i):
        return self.opposite(i)

    def arc_angles(self, i):
        """(center, theta_start, sweep) of the boundary arc from vertex i to i+1."""
        c = self.vertices[self.opposite(i)]
        d0 = self.vertices[i] - c
        d1 = self.vertices[(i + 1) % self.n] - c
        t0 = float(np.arctan2(d0[1], d0[0]))
        t1 = float(np.arctan2(d1[1], d1[0]))
        return c, t0, float(wrap_angle(t1 - t0))

    def boundary_points(self, per_arc=64):
        """Sample every boundary arc at ``per_arc`` points (including ends)."""
        out = []
        ts = np.linspace(0.0, 1.0, per_arc)
        for i in range(self.n):
            c, t0, sweep = self.arc_angles(i)
            ang = t0 + ts * sweep
            out.append(c + np.stack([np.cos(ang), np.sin(ang)], axis=1))
        return np.concatenate(out)


def support2d(poly, u):
    """Support of the polygon in planar direction ``u`` (need not be unit)."""
    u = np.asarray(u, dtype=float)
    best = float(np.max(poly.vertices @ u))
    theta = np.arctan2(u[1], u[0])
    for i in range(poly.n):
        c, t0, sweep = poly.arc_angles(i)
        if wrap_angle(theta - t0) <= sweep:
            best = max(best, float(c @ u) + float(np.linalg.norm(u)))
    return best


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    residual: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    @property
    def max_residual(self):
        return max((c.residual for c in self.checks), default=0.0)

    def __str__(self):
        lines = [f"[{'PASS' if c.ok else 'FAIL'}] {c.name}: residual={c.residual:.3e} {c.detail}"
                 for c in self.checks]
        return "\n".join(lines)


def validate(poly, tol=EQ_TOL, width_directions=360):
    """Check every structural invariant; failures are data, not exceptions."""
    checks = []
    verts = poly.vertices
    n = poly.n

    parity_ok = (n >= 3) and (n % 2 == 1)
    checks.append(CheckResult("odd-count", parity_ok, 0.0 if parity_ok else 1.0,
                              f"n={n}"))
    finite_ok = bool(np.all(np.isfinite(verts)))
    checks.append(CheckResult("finite-coordinates", finite_ok, 0.0 if finite_ok else np.inf))
    if not (parity_ok and finite_ok):
        return ValidationReport(tuple(checks))

    # counterclockwise orientation via the shoelace sum over vertices
    x, y = verts[:, 0], verts[:, 1]
    area2 = float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    checks.append(CheckResult("ccw-orientation", area2 > 0.0, min(0.0, area2)))

    diff = verts[:, None, :] - verts[None, :, :]
    dists = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    over = float(dists.max() - 1.0)
    checks.append(CheckResult("pairwise-distance<=1", over <= tol, max(over, 0.0)))

    worst_arc = 0.0
    for i in range(n):
        c = verts[poly.opposite(i)]
        r0 = abs(np.linalg.norm(verts[i] - c) - 1.0)
        r1 = abs(np.linalg.norm(verts[(i + 1) % n] - c) - 1.0)
        worst_arc = max(worst_arc, r0, r1)
    checks.append(CheckResult("arcs-centered-at-opposite-vertex", worst_arc <= tol, worst_arc))

    worst_w = 0.0
    if worst_arc <= 1e-3:  # width only meaningful on structurally sane data
        ang = np.linspace(0.0, np.pi, width_directions, endpoint=False)
        for a in ang:
            u = np.array([np.cos(a), np.sin(a)])
            w = support2d(poly, u) + support2d(poly, -u)
            worst_w = max(worst_w, abs(w - 1.0))
    else:
        worst_w = np.inf
    checks.append(CheckResult("width-equals-1", worst_w <= tol, worst_w,
                              f"{width_directions} directions"))

    return ValidationReport(tuple(checks))


def make_regular(n):
    """Regular Reuleaux polygon with n vertices, first vertex on the +x axis."""
    _require_odd(n)
    radius = 1.0 / (2.0 * np.cos(np.pi / (2.0 * n)))
    ang = TWO_PI * np.arange(n) / n
    verts = radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return ReuleauxPolygon(verts)


def _require_odd(n):
    if n < 3 or n % 2 == 0:
        raise EvenOrTooSmallN(f"need an odd vertex count >= 3, got {n}")


def _closure_residual(beta):
    """Closure defect of the rotating-diameter construction for arc angles beta.

    The pivot walk steps by u_k = (-1)**(k+1) * exp(1j * s_k) with s_k the
    partial angle sums; the walk closes iff the steps sum to zero.
    """
    s = np.cumsum(beta)
    signs = np.where(np.arange(1, len(beta) + 1) % 2 == 1, 1.0, -1.0)
    steps = signs * np.exp(1j * s)
    return steps.sum()


def _project_to_closure(beta, iters=80, tol=1e-13):
    """Newton-project arc angles onto {sum = pi, closure = 0}; None on failure."""
    beta = np.asarray(beta, dtype=float).copy()
    n = len(beta)
    for _ in range(iters):
        s = np.cumsum(beta)
        signs = np.where(np.arange(1, n + 1) % 2 == 1, 1.0, -1.0)
        steps = signs * np.exp(1j * s)
        c = steps.sum()
        f = np.array([c.real, c.imag, beta.sum() - np.pi])
        if np.max(np.abs(f)) < tol:
            return beta
        # d(step_k)/d(beta_j) = i * step_k for j <= k  ->  suffix sums
        suffix = np.cumsum(steps[::-1])[::-1]
        dc = 1j * suffix
        jac = np.vstack([dc.real, dc.imag, np.ones(n)])
        delta, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        beta = beta + delta
        if np.any(beta <= 1e-4):
            return None
    return None


def _rotating_construction(beta):
    """Pivot points of the rotating unit diameter for closed arc angles."""
    p = 0.0 + 0.0j
    w = 1.0 + 0.0j
    pivots = []
    for b in beta:
        pivots.append(p)
        w = w * np.exp(1j * b)
        p, w = p + w, -w
    pts = np.array(pivots)
    return np.stack([pts.real, pts.imag], axis=1)


def _ccw_from_pivots(pivots):
    """Sort convex-position points counterclockwise, starting at the origin pivot."""
    centroid = pivots.mean(axis=0)
    ang = np.arctan2(pivots[:, 1] - centroid[1], pivots[:, 0] - centroid[0])
    order = np.argsort(ang)
    sorted_pts = pivots[order]
    start = int(np.argmin(np.einsum("ij,ij->i", sorted_pts, sorted_pts)))
    return np.roll(sorted_pts, -start, axis=0)


def make_random(n, seed):
    """Seeded random Reuleaux polygon in canonical pose.

    Canonical pose: first vertex at the origin, the diameter leaving it along
    +x.  Deterministic in ``seed``; retries internally until ``validate``
    passes (arc angles below ``MIN_ARC_ANGLE`` are rejected as too flat).
    """
    _require_odd(n)
    rng = np.random.default_rng(seed)
    for _ in range(MAX_GENERATION_ATTEMPTS):
        beta = rng.dirichlet(np.ones(n)) * np.pi
        beta = _project_to_closure(beta)
        if beta is None or beta.min() < MIN_ARC_ANGLE:
            continue
        pivots = _rotating_construction(beta)
        poly = ReuleauxPolygon(_ccw_from_pivots(pivots))
        if validate(poly).ok:
            return poly
    raise GeometryError(f"no valid Reuleaux polygon for n={n} in "
                        f"{MAX_GENERATION_ATTEMPTS} attempts (seed={seed})")


def diameter_pairs_2d(poly, tol=EQ_TOL):
    """Vertex index pairs at unit distance; the diameter graph of the polygon."""
    verts = poly.vertices
    pairs = []
    for i in range(poly.n):
        for j in range(i + 1, poly.n):
            if abs(np.linalg.norm(verts[i] - verts[j]) - 1.0) <= tol:
                pairs.append((i, j))
    return pairs
