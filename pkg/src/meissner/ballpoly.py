"""Ball polyhedra: intersections of unit balls, their singular graph, face
lattice and self-dual structure, plus the planar-to-3d lift.

``build_reuleaux_polyhedron`` takes a center set X of diameter 1 and
constructs the boundary structure of the intersection of unit balls around X:

* vertices: intersection points of unit-sphere triples that lie inside every
  ball; for a valid input these coincide with X itself, and the build fails
  loudly when they do not;
* edges: for each center pair (a, b), the circle S(a,1) & S(b,1) is clipped
  against all other balls; a surviving arc whose two endpoints are distinct
  vertices is the boundary edge separating the faces of a and b.  Several
  surviving arcs on one circle mean the polyhedron is not standard;
* faces: the face of center x is bounded by the edges whose circle pairs
  contain x; its boundary cycle is recovered by angle-sorting the face
  vertices about the direction from x to their centroid (faces are
  spherically convex, so the angular order is well defined).

Note the clipped circles run over all center pairs, not only unit-distance
pairs: an edge joins two vertices x, y whose faces meet, and the four cross
distances from {x, y} to the circle pair {a, b} equal 1, but d(x, y) and
d(a, b) themselves generally do not.  The count of unit-distance pairs still
equals the edge count 2|X| - 2; that identity is checked, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (LiftImaginary, MetricEmbeddingViolation, NotInvolutive,
                     NotStandard)
from .geom import EQ_TOL, TWO_PI, Arc3D, perp_frame, trilaterate_unit, unit, wrap_angle

_VERTEX_MATCH_TOL = 1e-6  # extracted vertices must coincide with centers well below this


@dataclass(frozen=True)
class PolyEdge:
    """Boundary arc between two faces.

    ``endpoints`` are vertex indices ordered along the arc (arc.point(0) is
    the first); ``dual_centers`` is the sorted index pair (a, b) whose sphere
    intersection circle carries the arc.
    """

    endpoints: tuple
    arc: Arc3D
    dual_centers: tuple


@dataclass(frozen=True)
class PolyFace:
    """Spherically convex face of one center, with an oriented boundary cycle.

    ``vertex_cycle`` lists the boundary vertices counterclockwise as seen
    from outside; ``edge_cycle[k]`` joins vertex_cycle[k] to vertex_cycle[k+1]
    and ``orientations[k]`` is +1 when that edge's arc runs the same way.
    """

    center: int
    vertex_cycle: tuple
    edge_cycle: tuple
    orientations: tuple


@dataclass(frozen=True)
class ReuleauxPolyhedron:
    """Intersection of unit balls whose 0-singular points are the centers.

    Vertices are index-aligned with centers, so the dual map tau exchanges
    vertex i with the face of center i.
    """

    centers: np.ndarray   # (m, 3)
    vertices: np.ndarray  # (m, 3), equal to centers within tolerance
    edges: tuple          # PolyEdge
    faces: tuple          # PolyFace, faces[i].center == i

    @property
    def m(self):
        return len(self.centers)

    def tau(self, i):
        """Face index dual to vertex i (and vice versa)."""
        return i

    def face_vertex_set(self, i):
        return set(self.faces[i].vertex_cycle)

    def edge_index_by_centers(self):
        return {frozenset(e.dual_centers): k for k, e in enumerate(self.edges)}

    def adjacency(self):
        """Vertex adjacency of the singular graph (sets of neighbor indices)."""
        adj = {i: set() for i in range(self.m)}
        for e in self.edges:
            x, y = e.endpoints
            adj[x].add(y)
            adj[y].add(x)
        return adj


def lift(poly, diagram, tol=EQ_TOL):
    """Lift a polygon and its Delaunay family to a 3-d center set.

    Returns (vtop, centers): the raised disk centers (c_T, sqrt(1 - r_T^2))
    and the full center set, polygon vertices (z = 0) first.
    """
    rs = np.array([f.radius for f in diagram.faces])
    if np.any(rs >= 1.0 - 0.0):
        bad = int(np.argmax(rs))
        raise LiftImaginary(f"disk radius {rs[bad]:.6f} >= 1 for face {diagram.faces[bad].indices}")
    vtop = np.array([[f.center[0], f.center[1], np.sqrt(1.0 - f.radius ** 2)]
                     for f in diagram.faces])
    base = np.hstack([poly.vertices, np.zeros((poly.n, 1))])
    return vtop, np.vstack([base, vtop])


def unit_distance_pairs(points, tol=EQ_TOL):
    """Index pairs at distance 1 (within tol)."""
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    out = []
    for i in range(m):
        for j in range(i + 1, m):
            if abs(d[i, j] - 1.0) <= tol:
                out.append((i, j))
    return out


def diameter_graph(points, tol=EQ_TOL):
    """Unit-distance graph of a point set of diameter 1.

    Returns (edges, degrees).  Raises when some pair exceeds distance 1.
    """
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    if d.max() > 1.0 + tol:
        i, j = np.unravel_index(np.argmax(d), d.shape)
        raise MetricEmbeddingViolation(
            f"pair ({i}, {j}) at distance {d[i, j]:.9f} > 1")
    edges = unit_distance_pairs(pts, tol)
    degs = np.zeros(len(pts), dtype=int)
    for i, j in edges:
        degs[i] += 1
        degs[j] += 1
    return edges, degs


def _extract_vertices(centers, tol):
    """0-singular candidates: unit-sphere triple points inside every ball."""
    m = len(centers)
    merge_tol = 10.0 * tol
    found = []
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                cand = trilaterate_unit(centers[i], centers[j], centers[k])
                if cand is None:
                    continue
                for p in cand:
                    d = np.linalg.norm(centers - p, axis=1)
                    if d.max() > 1.0 + tol:
                        continue
                    for q in found:
                        if np.linalg.norm(q - p) <= merge_tol:
                            break
                    else:
                        found.append(p)
    verts = []
    for p in found:
        d = np.linalg.norm(centers - p, axis=1)
        touch = np.nonzero(np.abs(d - 1.0) <= tol)[0]
        if len(touch) < 3:
            continue
        span = centers[touch] - p
        if np.linalg.matrix_rank(span, tol=1e-8) >= 3:
            verts.append(p)
    return verts


def _clip_circle(centers, a, b, tol):
    """Angular components of S(a,1) & S(b,1) inside every other ball.

    Returns (frame, components) where frame = (mid, rho, normal, u, v) and
    components is a list of (theta_lo, theta_hi) with positive width, or the
    full circle as (0, 2*pi).
    """
    ca, cb = centers[a], centers[b]
    d = float(np.linalg.norm(cb - ca))
    if d < 1e-12 or d >= 2.0:
        return None, []
    mid = 0.5 * (ca + cb)
    rho = np.sqrt(max(1.0 - 0.25 * d * d, 0.0))
    if rho < 1e-12:
        return None, []
    normal = (cb - ca) / d
    u, v = perp_frame(normal)

    allowed = [(0.0, TWO_PI)]
    for x in range(len(centers)):
        if x in (a, b):
            continue
        cx = centers[x]
        # |q(theta) - cx|^2 <= 1  <=>  A cos + B sin <= C
        off = mid - cx
        big_a = 2.0 * rho * float(np.dot(u, off))
        big_b = 2.0 * rho * float(np.dot(v, off))
        big_c = 1.0 - float(np.dot(off, off)) - rho * rho
        rr = np.hypot(big_a, big_b)
        if rr < 1e-15:
            if big_c < 0.0:
                return (mid, rho, normal, u, v), []
            continue
        ratio = big_c / rr
        if ratio >= 1.0:
            continue
        if ratio <= -1.0:
            return (mid, rho, normal, u, v), []
        phi = np.arctan2(big_b, big_a)
        alpha = np.arccos(ratio)
        # allowed where cos(theta - phi) <= ratio: [phi + alpha, phi + 2pi - alpha]
        lo = wrap_angle(phi + alpha)
        width = TWO_PI - 2.0 * alpha
        allowed = _intersect_intervals(allowed, lo, width)
        if not allowed:
            return (mid, rho, normal, u, v), []
    return (mid, rho, normal, u, v), _merge_wraparound(allowed)


def _intersect_intervals(intervals, lo, width):
    """Intersect circular intervals with one interval [lo, lo + width] mod 2pi."""
    pieces = [(lo, min(lo + width, TWO_PI))]
    if lo + width > TWO_PI:
        pieces.append((0.0, lo + width - TWO_PI))
    out = []
    for s0, s1 in intervals:
        for t0, t1 in pieces:
            lo2, hi2 = max(s0, t0), min(s1, t1)
            if hi2 - lo2 > 1e-15:
                out.append((lo2, hi2))
    return out


def _merge_wraparound(intervals):
    """Join the pieces that meet across the 0/2pi seam."""
    if len(intervals) >= 2:
        ordered = sorted(intervals)
        first, last = ordered[0], ordered[-1]
        if first[0] <= 1e-12 and last[1] >= TWO_PI - 1e-12:
            merged = (last[0], last[1] + (first[1] - first[0]))
            ordered = ordered[1:-1] + [merged]
        return ordered
    return sorted(intervals)


def _match_vertex(vertices, p, tol):
    d = np.linalg.norm(vertices - p, axis=1)
    k = int(np.argmin(d))
    return k if d[k] <= tol else None


def build_reuleaux_polyhedron(centers, tol=EQ_TOL):
    """Construct the full boundary structure over a unit-diameter center set.

    Raises :class:`MetricEmbeddingViolation`, :class:`NotStandard` or
    :class:`NotInvolutive` (naming a witness) when the input does not carry a
    Reuleaux polyhedron.
    """
    centers = np.asarray(centers, dtype=float)
    m = len(centers)
    if m < 4:
        raise MetricEmbeddingViolation(f"need at least 4 centers, got {m}")

    dg_edges, degs = diameter_graph(centers, tol)
    low = np.nonzero(degs < 3)[0]
    if len(low):
        raise MetricEmbeddingViolation(
            f"vertex {int(low[0])} has only {int(degs[low[0]])} unit-distance "
            f"partners; every vertex needs degree >= 3")

    # --- vertices -----------------------------------------------------------
    raw = _extract_vertices(centers, tol)
    matched = {}
    for p in raw:
        k = _match_vertex(centers, p, _VERTEX_MATCH_TOL)
        if k is None:
            raise MetricEmbeddingViolation(
                f"0-singular point {p.tolist()} does not coincide with any center")
        if k in matched:
            raise NotStandard(f"two distinct 0-singular points match center {k}")
        matched[k] = p
    missing = [i for i in range(m) if i not in matched]
    if missing:
        raise MetricEmbeddingViolation(
            f"center {missing[0]} is not a 0-singular boundary point")
    vertices = np.array([matched[i] for i in range(m)])

    # --- edges --------------------------------------------------------------
    edges = []
    for a in range(m):
        for b in range(a + 1, m):
            frame, comps = _clip_circle(centers, a, b, tol)
            if not comps:
                continue
            mid, rho, normal, u, v = frame
            arcs_here = []
            for lo, hi in comps:
                if hi - lo >= TWO_PI - 1e-9:
                    raise NotStandard(
                        f"circle of pair ({a}, {b}) survives uncut; the ball "
                        f"polyhedron is degenerate")
                p_lo = mid + rho * (np.cos(lo) * u + np.sin(lo) * v)
                p_hi = mid + rho * (np.cos(hi) * u + np.sin(hi) * v)
                k_lo = _match_vertex(vertices, p_lo, _VERTEX_MATCH_TOL)
                k_hi = _match_vertex(vertices, p_hi, _VERTEX_MATCH_TOL)
                if k_lo is None or k_hi is None:
                    raise NotStandard(
                        f"arc of pair ({a}, {b}) ends away from every vertex")
                if k_lo == k_hi:
                    continue  # grazing touch at one vertex
                # snap the span to the exact vertex positions
                t_lo = np.arctan2(np.dot(vertices[k_lo] - mid, v),
                                  np.dot(vertices[k_lo] - mid, u))
                t_hi = np.arctan2(np.dot(vertices[k_hi] - mid, v),
                                  np.dot(vertices[k_hi] - mid, u))
                sweep = wrap_angle(t_hi - t_lo)
                arc = Arc3D(center=mid, radius=rho, normal=normal, axis_u=u,
                            start=wrap_angle(t_lo), sweep=float(sweep))
                arcs_here.append(PolyEdge(endpoints=(k_lo, k_hi), arc=arc,
                                          dual_centers=(a, b)))
            if len(arcs_here) > 1:
                raise NotStandard(
                    f"faces of centers ({a}, {b}) meet in {len(arcs_here)} arcs")
            edges.extend(arcs_here)

    edges.sort(key=lambda e: e.dual_centers)
    edges = tuple(edges)
    if len(edges) != 2 * m - 2:
        raise NotStandard(f"{len(edges)} edges for {m} vertices; expected {2 * m - 2}")
    if len(dg_edges) != len(edges):
        raise MetricEmbeddingViolation(
            f"{len(dg_edges)} unit-distance pairs but {len(edges)} edges")

    seen_pairs = set()
    for e in edges:
        key = frozenset(e.endpoints)
        if key in seen_pairs:
            raise NotStandard(f"two edges join vertices {sorted(key)}; graph not simple")
        seen_pairs.add(key)

    # duality must pair edges involutively: the edge on circle (a, b) has
    # endpoints (x, y), and the edge on circle (x, y) must end at (a, b)
    by_centers = {frozenset(e.dual_centers): k for k, e in enumerate(edges)}
    for k, e in enumerate(edges):
        partner = by_centers.get(frozenset(e.endpoints))
        if partner is None:
            raise NotInvolutive(
                f"edge {e.endpoints} has no dual edge on circle {e.endpoints}")
        if frozenset(edges[partner].endpoints) != frozenset(e.dual_centers):
            raise NotInvolutive(
                f"dual of edge {e.endpoints} ends at "
                f"{edges[partner].endpoints}, expected {e.dual_centers}")

    # metric embedding condition: unit distance iff dual-face incidence
    unit_set = {frozenset(p) for p in dg_edges}
    face_vertex_sets = []
    for i in range(m):
        fv = {e.endpoints[0] for e in edges if i in e.dual_centers}
        fv |= {e.endpoints[1] for e in edges if i in e.dual_centers}
        face_vertex_sets.append(fv)
        expected = {j for j in range(m) if frozenset((i, j)) in unit_set}
        if fv != expected:
            raise MetricEmbeddingViolation(
                f"face of center {i} has vertices {sorted(fv)} but unit-distance "
                f"partners {sorted(expected)}")

    faces = tuple(_assemble_face(i, centers, vertices, edges, face_vertex_sets[i])
                  for i in range(m))

    _check_face_pairs(faces, by_centers, m)
    _check_orientations(faces, edges)
    _check_three_connected(m, edges)

    return ReuleauxPolyhedron(centers=centers, vertices=vertices,
                              edges=edges, faces=faces)


def _assemble_face(i, centers, vertices, edges, fv):
    """Order one face's boundary by angle about its outward direction."""
    if len(fv) < 3:
        raise NotStandard(f"face of center {i} has {len(fv)} boundary vertices")
    idx = sorted(fv)
    pts = vertices[idx]
    axis = unit(pts.mean(axis=0) - centers[i])
    u, v = perp_frame(axis)
    rel = pts - centers[i]
    ang = np.arctan2(rel @ v, rel @ u)
    cyc = [idx[k] for k in np.argsort(ang)]

    boundary = {}
    for k, e in enumerate(edges):
        if i in e.dual_centers:
            boundary[frozenset(e.endpoints)] = k
    edge_cycle, orients = [], []
    for t in range(len(cyc)):
        x, y = cyc[t], cyc[(t + 1) % len(cyc)]
        k = boundary.get(frozenset((x, y)))
        if k is None:
            raise NotStandard(
                f"face of center {i}: consecutive boundary vertices ({x}, {y}) "
                f"not joined by an edge of the face")
        edge_cycle.append(k)
        orients.append(1 if edges[k].endpoints == (x, y) else -1)
    if len(set(edge_cycle)) != len(edge_cycle) or len(edge_cycle) != len(boundary):
        raise NotStandard(f"face of center {i}: boundary walk does not use each "
                          f"edge exactly once")
    return PolyFace(center=i, vertex_cycle=tuple(cyc),
                    edge_cycle=tuple(edge_cycle), orientations=tuple(orients))


def _check_face_pairs(faces, by_centers, m):
    """Standardness: two faces share nothing, one vertex, or one edge."""
    for i in range(m):
        vi = set(faces[i].vertex_cycle)
        for j in range(i + 1, m):
            shared = vi & set(faces[j].vertex_cycle)
            has_edge = frozenset((i, j)) in by_centers
            if has_edge:
                if len(shared) != 2:
                    raise NotStandard(
                        f"faces {i}, {j} share an edge but {len(shared)} vertices")
            elif len(shared) > 1:
                raise NotStandard(
                    f"faces {i}, {j} share vertices {sorted(shared)} without an edge")


def _check_orientations(faces, edges):
    seen = {k: [] for k in range(len(edges))}
    for f in faces:
        for k, o in zip(f.edge_cycle, f.orientations):
            seen[k].append(o)
    for k, os in seen.items():
        if sorted(os) != [-1, 1]:
            raise NotStandard(f"edge {k} has face orientations {os}; expected one "
                              f"of each sign")


def _check_three_connected(m, edges):
    adj = {i: set() for i in range(m)}
    for e in edges:
        x, y = e.endpoints
        adj[x].add(y)
        adj[y].add(x)
    for drop_a in range(m):
        for drop_b in range(drop_a + 1, m):
            keep = [i for i in range(m) if i not in (drop_a, drop_b)]
            if len(keep) <= 1:
                continue
            seen = {keep[0]}
            stack = [keep[0]]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in (drop_a, drop_b) and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(keep):
                raise NotStandard(
                    f"removing vertices ({drop_a}, {drop_b}) disconnects the graph")


@dataclass(frozen=True)
class BoundaryClass:
    """Classification of a point relative to the boundary structure."""

    kind: str  # "regular" | "one-singular" | "zero-singular" | "not-on-boundary"
    center: int = -1
    edge: int = -1
    vertex: int = -1


def classify_boundary_point(phi, p, tol=EQ_TOL):
    """Classify ``p`` by the number and rank of its touching spheres."""
    p = np.asarray(p, dtype=float)
    d = np.linalg.norm(phi.centers - p, axis=1)
    if d.max() > 1.0 + tol:
        return BoundaryClass(kind="not-on-boundary")
    touch = np.nonzero(np.abs(d - 1.0) <= tol)[0]
    if len(touch) == 0:
        return BoundaryClass(kind="not-on-boundary")
    if len(touch) == 1:
        return BoundaryClass(kind="regular", center=int(touch[0]))
    span = phi.centers[touch] - p
    if np.linalg.matrix_rank(span, tol=1e-8) >= 3:
        k = _match_vertex(phi.vertices, p, _VERTEX_MATCH_TOL)
        return BoundaryClass(kind="zero-singular", vertex=-1 if k is None else k)
    by_centers = phi.edge_index_by_centers()
    edge = -1
    for a_i in range(len(touch)):
        for b_i in range(a_i + 1, len(touch)):
            k = by_centers.get(frozenset((int(touch[a_i]), int(touch[b_i]))))
            if k is not None:
                edge = k
                break
    return BoundaryClass(kind="one-singular", edge=edge)
