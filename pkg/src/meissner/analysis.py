"""Numerical verification of every structural claim: constant width,
diameter counts, the Euler count, half-body diameter, slice recovery, and
volume/area with independent oracles.

Width is verified on the *skeleton* (vertices plus retained dual arcs), not
on a mesh.  The justification, recorded here because it carries the whole
check: let N be a compact set of diameter <= 1 and M the intersection of the
unit balls centered along N.  Writing S(u) for the support function of N,

* N is contained in M (every two points of N are within distance 1), so the
  support of M is at least S(u) in every direction u;
* M lies inside each ball B(c, 1), so the support of M is at most
  min over c of (c . u + 1) = 1 - S(-u).

Hence the width of M in direction u is pinched between S(u) + S(-u) and
2 - S(u) - S(-u); whenever S(u) + S(-u) = 1 the width in that direction is
exactly 1.  The verifier therefore evaluates S(u) + S(-u) over a direction
net (points and exact arc support, no sampling of the curves) and separately
cross-checks against a mesh-based width at coarse tolerance, so a bug in one
route cannot silently pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geom import EQ_TOL, arc_support_values, max_pairwise_distance

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


@dataclass(frozen=True)
class DirectionSampler:
    """Deterministic unit-direction generator: Fibonacci net or seeded random."""

    count: int = 100_000
    scheme: str = "fibonacci"  # or "random"
    seed: int = 0

    def directions(self):
        if self.scheme == "fibonacci":
            return fibonacci_directions(self.count)
        if self.scheme == "random":
            rng = np.random.default_rng(self.seed)
            v = rng.normal(size=(self.count, 3))
            return v / np.linalg.norm(v, axis=1, keepdims=True)
        raise ValueError(f"unknown direction scheme {self.scheme!r}")


def fibonacci_directions(count):
    """Fibonacci sphere net: ``count`` well-spread unit directions."""
    i = np.arange(count, dtype=float)
    z = 1.0 - 2.0 * (i + 0.5) / count
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    phi = i * GOLDEN_ANGLE
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def skeleton_support(points, arcs, dirs):
    """Support values of a skeleton (points + arcs) over a direction array."""
    dirs = np.asarray(dirs, dtype=float)
    vals = np.max(dirs @ np.asarray(points, dtype=float).T, axis=1)
    for arc in arcs:
        vals = np.maximum(vals, arc_support_values(arc, dirs))
    return vals


def skeleton_width(points, arcs, u):
    """S(u) + S(-u) for a single direction; equals the body width when 1."""
    u = np.asarray(u, dtype=float).reshape(1, 3)
    return float(skeleton_support(points, arcs, u)[0]
                 + skeleton_support(points, arcs, -u)[0])


@dataclass(frozen=True)
class WidthReport:
    directions: int
    min_width: float
    max_width: float
    worst_direction: np.ndarray
    tol: float
    skeleton_diameter: float

    @property
    def passed(self):
        return max(abs(self.min_width - 1.0), abs(self.max_width - 1.0)) <= self.tol

    @property
    def max_deviation(self):
        return max(abs(self.min_width - 1.0), abs(self.max_width - 1.0))


def constant_width_check(solid, sampler=DirectionSampler(), tol=1e-9,
                         dirs=None):
    """Evaluate the skeleton width over sampled directions.

    ``solid`` is a MeissnerSolid or a (points, arcs) pair.  A precomputed
    direction array can be passed to amortize the net over many bodies.
    """
    if hasattr(solid, "skeleton_points"):
        points, arcs = solid.skeleton_points, solid.skeleton_arcs
    else:
        points, arcs = solid
    if dirs is None:
        dirs = sampler.directions()
    widths = (skeleton_support(points, arcs, dirs)
              + skeleton_support(points, arcs, -dirs))
    worst = int(np.argmax(np.abs(widths - 1.0)))
    diam = _skeleton_diameter(points, arcs)
    return WidthReport(directions=len(dirs),
                       min_width=float(widths.min()),
                       max_width=float(widths.max()),
                       worst_direction=dirs[worst].copy(),
                       tol=tol,
                       skeleton_diameter=diam)


def _skeleton_diameter(points, arcs, per_arc=64):
    """Max pairwise distance over the skeleton, sampling each arc."""
    samples = [np.asarray(points, dtype=float)]
    ts = np.linspace(0.0, 1.0, per_arc)
    for arc in arcs:
        samples.append(arc.points(ts))
    return max_pairwise_distance(np.vstack(samples))


@dataclass(frozen=True)
class AntipodeReport:
    samples: int
    max_residual: float
    tol: float

    @property
    def passed(self):
        return self.max_residual <= self.tol


def antipode_check(solid, per_curve=16, rings=4, tol=EQ_TOL):
    """Every sampled boundary point has an antipode at distance exactly 1.

    Cap points pair with their face's center vertex; wedge points pair with
    the dual-arc point of their revolution circle; seam points (the geodesic
    rims, sampled explicitly) pair with the rim's sphere center; vertices
    pair with any unit-distance partner.
    """
    phi = solid.base
    verts = phi.vertices
    worst = 0.0
    count = 0
    ts = np.linspace(0.0, 1.0, per_curve)

    for tf in solid.faces:
        x = verts[tf.center]
        boundary = np.vstack([c.arc.points(ts) for c in tf.curves])
        interior = _cap_interior(x, boundary, rings)
        pts = np.vstack([boundary, interior])
        worst = max(worst, float(np.abs(np.linalg.norm(pts - x, axis=1) - 1.0).max()))
        count += len(pts)

    svals = np.linspace(0.0, 1.0, per_curve)
    tvals = np.linspace(0.0, 1.0, per_curve)
    from .surgery import wedge_grid

    for k, w in enumerate(solid.wedges):
        if k in solid.unsurgered_pairs:
            continue
        grid = wedge_grid(w, phi, svals, tvals)
        centers = w.dual_arc.points(svals)
        d = np.linalg.norm(grid[:, 1:-1, :] - centers[:, None, :], axis=2)
        worst = max(worst, float(np.abs(d - 1.0).max()))
        count += grid[:, 1:-1, :].size // 3
        # seam curves: rim points pair with the rim sphere's center
        for rim, c_idx in ((w.sigma_a, w.a), (w.sigma_b, w.b)):
            rp = rim.points(ts)
            d = np.linalg.norm(rp - verts[c_idx], axis=1)
            worst = max(worst, float(np.abs(d - 1.0).max()))
            count += len(rp)

    adj = phi.adjacency()
    for i in range(phi.m):
        j = min(adj[i]) if adj[i] else None
        if j is None:
            continue
        # vertices of the base graph keep a unit partner on the dual face
        dist_ok = []
        for j in adj[i]:
            dist_ok.append(abs(np.linalg.norm(verts[i] - verts[j]) - 1.0))
        worst = max(worst, float(min(dist_ok)))
        count += 1

    return AntipodeReport(samples=count, max_residual=worst, tol=tol)


def _cap_interior(center, boundary, rings):
    """Spherical interior samples of a cap: geodesic rays apex -> boundary."""
    dirs = boundary - center
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    apex_dir = dirs.mean(axis=0)
    apex_dir /= np.linalg.norm(apex_dir)
    omega = np.arccos(np.clip(dirs @ apex_dir, -1.0, 1.0))
    out = [center + apex_dir]
    for k in range(1, rings):
        f = k / rings
        mix = (np.sin((1.0 - f) * omega)[:, None] * apex_dir[None, :]
               + np.sin(f * omega)[:, None] * dirs) / np.sin(omega)[:, None]
        out.append(center + mix / np.linalg.norm(mix, axis=1, keepdims=True))
    return np.vstack(out)


def diameter_count(points, tol=EQ_TOL):
    """Number of unit-distance pairs in a point set of diameter 1."""
    from .ballpoly import diameter_graph

    edges, _ = diameter_graph(points, tol)
    return len(edges)


def euler_check(phi):
    """(v, e, f, v - e + f); the alternating sum must be exactly 2."""
    v, e, f = phi.m, len(phi.edges), len(phi.faces)
    return v, e, f, v - e + f


# --- half body P+ ------------------------------------------------------------

def half_body_samples(poly, diagram=None, count=1000, seed=0):
    """Boundary samples of the upper half of the n-ball intersection over a
    polygon: spherical patches with z >= 0 plus the flat z = 0 face.

    The polygon vertices and the lifted disk apexes are always included, so
    the unit-distance pairs the structure guarantees are present exactly.
    """
    rng = np.random.default_rng(seed)
    pts2 = poly.vertices
    centers = np.hstack([pts2, np.zeros((poly.n, 1))])
    out = [centers]
    if diagram is not None:
        apex = np.array([[f.center[0], f.center[1], np.sqrt(1.0 - f.radius ** 2)]
                         for f in diagram.faces])
        out.append(apex)

    boundary2 = poly.boundary_points(per_arc=max(4, count // (4 * poly.n)))
    out.append(np.hstack([boundary2, np.zeros((len(boundary2), 1))]))

    have = sum(len(o) for o in out)
    need = max(count - have, 0)
    got = 0
    while got < need:
        i = int(rng.integers(poly.n))
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        if v[2] < 0.0:
            v = -v
        q = centers[i] + v
        d = np.linalg.norm(centers - q, axis=1)
        if d.max() <= 1.0 + 1e-12:
            out.append(q[None, :])
            got += 1
    return np.vstack(out)


@dataclass(frozen=True)
class DiameterReport:
    samples: int
    max_distance: float
    tol: float

    @property
    def passed(self):
        return self.max_distance <= 1.0 + self.tol and self.max_distance >= 1.0 - self.tol


def half_body_diameter_check(poly, diagram=None, count=1000, seed=0, tol=EQ_TOL):
    """Diameter of the upper half body over boundary samples: exactly 1."""
    pts = half_body_samples(poly, diagram, count, seed)
    return DiameterReport(samples=len(pts),
                          max_distance=max_pairwise_distance(pts), tol=tol)


# --- over-width of the unsurgered polyhedron ---------------------------------

def max_boundary_distance(phi, per_arc=2048):
    """Max boundary-to-boundary distance via dense edge-arc sampling.

    For unit-diameter center sets this exceeds 1 (ball polyhedra are not
    constant width); the sharp value is attained between points of dual
    edge arcs.
    """
    ts = np.linspace(0.0, 1.0, per_arc)
    samples = [phi.vertices]
    for e in phi.edges:
        samples.append(e.arc.points(ts))
    return max_pairwise_distance(np.vstack(samples))


# --- slice recovery -----------------------------------------------------------

@dataclass(frozen=True)
class SliceReport:
    samples: int
    max_residual: float
    tol: float

    @property
    def passed(self):
        return self.max_residual <= self.tol


def slice_check(solid, poly, count=256, per_arc=256, tol=1e-9):
    """The z = 0 cross-section of the solid equals the source polygon.

    Both regions are star shaped about the polygon's vertex centroid; the
    radial exit distances through ``count`` directions must agree.  The solid
    section is the intersection of the disks cut at z = 0 by unit balls
    centered along the skeleton (points and densely sampled arcs).
    """
    pts, arcs = solid.skeleton_points, solid.skeleton_arcs
    ts = np.linspace(0.0, 1.0, per_arc)
    centers3 = np.vstack([np.asarray(pts, dtype=float)]
                         + [arc.points(ts) for arc in arcs])
    keep = np.abs(centers3[:, 2]) <= 1.0
    centers3 = centers3[keep]
    disk_c = centers3[:, :2]
    disk_r2 = 1.0 - centers3[:, 2] ** 2

    poly_c = poly.vertices
    origin = poly.vertices.mean(axis=0)

    ang = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
    worst = 0.0
    for a in ang:
        d = np.array([np.cos(a), np.sin(a)])
        r_solid = _ray_exit(origin, d, disk_c, disk_r2)
        r_poly = _ray_exit(origin, d, poly_c, np.ones(len(poly_c)))
        worst = max(worst, abs(r_solid - r_poly))
    return SliceReport(samples=count, max_residual=worst, tol=tol)


def _ray_exit(origin, d, centers, radii_sq):
    """Exit parameter of the ray origin + t d from an intersection of disks."""
    rel = origin - centers
    b = rel @ d
    c = np.einsum("ij,ij->i", rel, rel) - radii_sq
    disc = b * b - c
    if np.any(disc < 0.0):
        raise ValueError("ray origin lies outside some constraint disk")
    t = -b + np.sqrt(disc)
    return float(t.min())


# --- mesh-based quantities ----------------------------------------------------

def volume_and_area(mesh):
    """Volume (divergence theorem) and area of a watertight, oriented mesh."""
    from .meshing import require_watertight

    require_watertight(mesh)
    v = mesh.vertices
    t = mesh.triangles
    p0, p1, p2 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    volume = float(np.einsum("ij,ij->i", p0, np.cross(p1, p2)).sum() / 6.0)
    area = float(0.5 * np.linalg.norm(np.cross(p1 - p0, p2 - p0), axis=1).sum())
    return volume, area


def mesh_width_agreement(solid, mesh, dirs):
    """Max |mesh width - skeleton width| over a direction set.

    Cross-checks the support identity against an independent route: the mesh
    width is max projection minus min projection over the mesh vertex set.
    """
    dirs = np.asarray(dirs, dtype=float)
    proj = dirs @ mesh.vertices.T
    mesh_w = proj.max(axis=1) - proj.min(axis=1)
    skel_w = (skeleton_support(solid.skeleton_points, solid.skeleton_arcs, dirs)
              + skeleton_support(solid.skeleton_points, solid.skeleton_arcs, -dirs))
    return float(np.abs(mesh_w - skel_w).max())
