"""Shared geometric primitives: tolerances, 3-d circular arcs and the small
support / circumcircle / trilateration kernels everything else builds on.

All geometry is plain double precision over numpy arrays.  Distances that the
constructions make exactly equal are only ever *tested* equal against an
explicit tolerance (``EQ_TOL`` unless the caller passes its own); the inputs
have irrational coordinates, so exact predicates would buy nothing here.

Angles are normalized to [0, 2*pi) and arc spans are stored as
(start, sweep) with sweep > 0, which avoids wrap-around ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadDualArc, CollinearInput

EQ_TOL = 1e-9
TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Tolerance:
    """Distance-equality tolerance plus a refinement-dependent mesh tolerance."""

    eq_tol: float = EQ_TOL
    mesh_tol: float = 1e-3

    def __post_init__(self):
        if not 0.0 < self.eq_tol < 1e-3:
            raise ValueError("eq_tol must lie in (0, 1e-3)")


def unit(v):
    """Normalized copy of ``v``; rejects near-zero input."""
    v = np.asarray(v, dtype=float)
    n = float(np.linalg.norm(v))
    if n < 1e-15:
        raise ValueError("cannot normalize a near-zero vector")
    return v / n


def perp_frame(normal):
    """Deterministic right-handed in-plane axes (u, v) for unit ``normal``."""
    k = int(np.argmin(np.abs(normal)))
    e = np.zeros(3)
    e[k] = 1.0
    u = unit(e - np.dot(e, normal) * normal)
    return u, np.cross(normal, u)


def rotate_about_axis(v, axis, angle):
    """Rodrigues rotation of ``v`` about unit ``axis`` by ``angle`` (radians)."""
    c, s = np.cos(angle), np.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1.0 - c)


def wrap_angle(theta):
    """Map an angle (or array of angles) into [0, 2*pi)."""
    return np.mod(theta, TWO_PI)


@dataclass(frozen=True)
class Arc3D:
    """Circular arc in 3-d.

    The carrying circle has ``center``, ``radius`` and unit ``normal``;
    ``axis_u`` is a unit in-plane reference direction and angles are measured
    from it counterclockwise about ``normal``.  The arc runs from angle
    ``start`` over a positive ``sweep`` in (0, 2*pi]; sweep == 2*pi is a full
    circle.
    """

    center: np.ndarray
    radius: float
    normal: np.ndarray
    axis_u: np.ndarray
    start: float
    sweep: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))
        object.__setattr__(self, "axis_u", np.asarray(self.axis_u, dtype=float))
        if self.radius <= 0.0:
            raise ValueError("arc radius must be positive")
        if not 0.0 < self.sweep <= TWO_PI + 1e-12:
            raise ValueError("arc sweep must lie in (0, 2*pi]")

    @property
    def axis_v(self):
        return np.cross(self.normal, self.axis_u)

    @property
    def length(self):
        return self.radius * self.sweep

    def point_at_angle(self, theta):
        theta = np.asarray(theta, dtype=float)
        u, v = self.axis_u, self.axis_v
        cs, sn = np.cos(theta), np.sin(theta)
        return self.center + self.radius * (np.multiply.outer(cs, u) + np.multiply.outer(sn, v))

    def point(self, t):
        """Point at fraction ``t`` in [0, 1] along the arc."""
        return self.point_at_angle(self.start + float(t) * self.sweep)

    def points(self, t):
        """Vectorized :meth:`point` for an array of fractions."""
        t = np.asarray(t, dtype=float)
        return self.point_at_angle(self.start + t * self.sweep)

    @property
    def endpoints(self):
        return self.point(0.0), self.point(1.0)

    @property
    def midpoint(self):
        return self.point(0.5)

    def angle_of(self, p):
        """Angle of a point assumed to lie on the carrying circle."""
        d = np.asarray(p, dtype=float) - self.center
        return float(np.arctan2(np.dot(d, self.axis_v), np.dot(d, self.axis_u)))

    def contains_angle(self, theta, slack=1e-12):
        rel = wrap_angle(np.asarray(theta) - self.start)
        return (rel <= self.sweep + slack) | (rel >= TWO_PI - slack)

    def reversed(self):
        """Same point set traversed the other way."""
        return Arc3D(
            center=self.center,
            radius=self.radius,
            normal=-self.normal,
            axis_u=self.axis_u,
            start=wrap_angle(-(self.start + self.sweep)),
            sweep=self.sweep,
        )

    @staticmethod
    def full_circle(center, radius, normal):
        normal = unit(normal)
        u, _ = perp_frame(normal)
        return Arc3D(center=np.asarray(center, dtype=float), radius=float(radius),
                     normal=normal, axis_u=u, start=0.0, sweep=TWO_PI)

    @staticmethod
    def minor_between(center, p, q):
        """Arc centered at ``center`` from ``p`` to ``q`` the short way round."""
        center = np.asarray(center, dtype=float)
        dp = np.asarray(p, dtype=float) - center
        dq = np.asarray(q, dtype=float) - center
        r = float(np.linalg.norm(dp))
        cr = np.cross(dp, dq)
        gamma = float(np.arctan2(np.linalg.norm(cr), np.dot(dp, dq)))
        if gamma <= 0.0 or gamma >= np.pi - 1e-9:
            raise ValueError("endpoints are coincident or antipodal on the circle")
        normal = unit(cr)
        return Arc3D(center=center, radius=r, normal=normal, axis_u=dp / r,
                     start=0.0, sweep=gamma)


def arc_support(arc, u):
    """Max of ``c . u`` over the arc, with a maximizing point.

    The maximizer is the in-plane projection point when its angle lies in the
    arc's span and the better endpoint otherwise.
    """
    u = np.asarray(u, dtype=float)
    w = u - np.dot(u, arc.normal) * arc.normal
    wn = float(np.linalg.norm(w))
    if wn < 1e-15:
        # direction orthogonal to the arc plane: constant over the arc
        p = arc.point(0.0)
        return float(np.dot(p, u)), p
    theta = np.arctan2(np.dot(w, arc.axis_v), np.dot(w, arc.axis_u))
    if arc.contains_angle(theta):
        p = arc.center + arc.radius * (w / wn)
        return float(np.dot(p, u)), p
    pa, pb = arc.endpoints
    va, vb = float(np.dot(pa, u)), float(np.dot(pb, u))
    return (va, pa) if va >= vb else (vb, pb)


def arc_support_values(arc, dirs):
    """Vectorized support values of one arc over a (k, 3) direction array."""
    dirs = np.asarray(dirs, dtype=float)
    n, uax, vax = arc.normal, arc.axis_u, arc.axis_v
    wn_u = dirs @ uax
    wn_v = dirs @ vax
    wnorm = np.hypot(wn_u, wn_v)
    theta = np.arctan2(wn_v, wn_u)
    inside = arc.contains_angle(theta) | (wnorm < 1e-15)
    base = dirs @ arc.center
    val_in = base + arc.radius * wnorm
    pa, pb = arc.endpoints
    val_out = np.maximum(dirs @ pa, dirs @ pb)
    return np.where(inside, val_in, val_out)


def arc_support_points(arc, dirs):
    """Vectorized support values and maximizing points of one arc.

    Returns (values (k,), points (k, 3)).
    """
    dirs = np.asarray(dirs, dtype=float)
    uax, vax = arc.axis_u, arc.axis_v
    wn_u = dirs @ uax
    wn_v = dirs @ vax
    wnorm = np.hypot(wn_u, wn_v)
    theta = np.arctan2(wn_v, wn_u)
    inside = arc.contains_angle(theta) | (wnorm < 1e-15)
    safe = np.maximum(wnorm, 1e-300)
    pts_in = (arc.center[None, :]
              + arc.radius * (wn_u / safe)[:, None] * uax[None, :]
              + arc.radius * (wn_v / safe)[:, None] * vax[None, :])
    val_in = dirs @ arc.center + arc.radius * wnorm
    pa, pb = arc.endpoints
    va, vb = dirs @ pa, dirs @ pb
    a_best = va >= vb
    pts_out = np.where(a_best[:, None], pa[None, :], pb[None, :])
    val_out = np.where(a_best, va, vb)
    vals = np.where(inside, val_in, val_out)
    pts = np.where(inside[:, None], pts_in, pts_out)
    return vals, pts


def arc_max_distance_values(arc, pts):
    """Vectorized farthest distance from each query point to the arc."""
    pts = np.asarray(pts, dtype=float)
    rel = pts - arc.center
    axial = rel @ arc.normal
    wn_u = rel @ arc.axis_u
    wn_v = rel @ arc.axis_v
    wnorm = np.hypot(wn_u, wn_v)
    # farthest circle point lies opposite the in-plane component
    theta = np.arctan2(-wn_v, -wn_u)
    inside = arc.contains_angle(theta) | (wnorm < 1e-15)
    d_in = np.sqrt((wnorm + arc.radius) ** 2 + axial ** 2)
    pa, pb = arc.endpoints
    d_out = np.maximum(np.linalg.norm(pts - pa, axis=1),
                       np.linalg.norm(pts - pb, axis=1))
    return np.where(inside, d_in, d_out)


def circumcircle(p, q, r, tol=EQ_TOL):
    """Center and radius of the circle through three 2-d points.

    Raises :class:`CollinearInput` when the points are collinear within
    ``tol`` (measured as the triangle height).
    """
    a = np.asarray(p, dtype=float)
    b = np.asarray(q, dtype=float)
    c = np.asarray(r, dtype=float)
    cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    span = max(np.linalg.norm(b - a), np.linalg.norm(c - a), np.linalg.norm(c - b))
    if span < 1e-15 or abs(cross) / span <= tol:
        raise CollinearInput(f"collinear points {a.tolist()}, {b.tolist()}, {c.tolist()}")
    d = 2.0 * cross
    aa, bb, cc = a @ a, b @ b, c @ c
    ux = (aa * (b[1] - c[1]) + bb * (c[1] - a[1]) + cc * (a[1] - b[1])) / d
    uy = (aa * (c[0] - b[0]) + bb * (a[0] - c[0]) + cc * (b[0] - a[0])) / d
    center = np.array([ux, uy])
    radius = float(np.mean([np.linalg.norm(center - t) for t in (a, b, c)]))
    return center, radius


def trilaterate_unit(a, b, c):
    """Intersection points of three unit spheres centered at a, b, c.

    Returns a (2, 3) array of the two candidates, or None when the centers
    are (nearly) collinear or the spheres do not meet.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    ab = b - a
    d = float(np.linalg.norm(ab))
    if d < 1e-12 or d >= 2.0:
        return None
    ex = ab / d
    acv = c - a
    i = float(np.dot(ex, acv))
    ey_raw = acv - i * ex
    j = float(np.linalg.norm(ey_raw))
    if j < 1e-12:
        return None
    ey = ey_raw / j
    ez = np.cross(ex, ey)
    x = d / 2.0  # equal unit radii
    y = (i * i + j * j - 2.0 * i * x) / (2.0 * j)
    zsq = 1.0 - x * x - y * y
    if zsq < -1e-12:
        return None
    z = np.sqrt(max(zsq, 0.0))
    base = a + x * ex + y * ey
    return np.stack([base + z * ez, base - z * ez])


def wedge_arc_point(x, y, dual_arc, s, t, tol=EQ_TOL):
    """Point at fraction ``t`` on the unit-radius minor arc from ``x`` to ``y``
    centered at ``dual_arc.point(s)``.

    Raises :class:`BadDualArc` if the chosen center is not at unit distance
    from both endpoints.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    c = dual_arc.point(s)
    dx, dy = x - c, y - c
    if abs(np.linalg.norm(dx) - 1.0) > tol or abs(np.linalg.norm(dy) - 1.0) > tol:
        raise BadDualArc("dual arc point is not unit distance from both endpoints")
    cr = np.cross(dx, dy)
    gamma = float(np.arctan2(np.linalg.norm(cr), np.dot(dx, dy)))
    if t <= 0.0:
        return x
    if t >= 1.0:
        return y
    axis = unit(cr)
    return c + rotate_about_axis(dx, axis, float(t) * gamma)


def wedge_family_points(x, y, dual_arc, s, t):
    """Vectorized wedge sampling: grid of arc points for fraction arrays s, t.

    Returns an (len(s), len(t), 3) array.  Rows s index the dual-arc centers,
    columns t run along each unit arc from ``x`` (t=0) to ``y`` (t=1).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    centers = dual_arc.points(s)  # (S, 3)
    v0 = x - centers
    v1 = y - centers
    cr = np.cross(v0, v1)
    crn = np.linalg.norm(cr, axis=1)
    gamma = np.arctan2(crn, np.einsum("ij,ij->i", v0, v1))
    axes = cr / crn[:, None]
    kxv = np.cross(axes, v0)
    ang = gamma[:, None] * t[None, :]  # (S, T)
    # axes are orthogonal to v0, so the Rodrigues axial term vanishes
    pts = (centers[:, None, :]
           + v0[:, None, :] * np.cos(ang)[:, :, None]
           + kxv[:, None, :] * np.sin(ang)[:, :, None])
    return pts


def max_pairwise_distance(points, block=1024):
    """Exact maximum pairwise distance of an (m, 3) point set, blockwise."""
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    if m < 2:
        return 0.0
    sq = np.einsum("ij,ij->i", pts, pts)
    best = 0.0
    for lo in range(0, m, block):
        hi = min(lo + block, m)
        g = pts[lo:hi] @ pts.T
        d2 = sq[lo:hi, None] + sq[None, :] - 2.0 * g
        best = max(best, float(d2.max()))
    return float(np.sqrt(max(best, 0.0)))
