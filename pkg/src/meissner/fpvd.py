"""Farthest-point Voronoi diagram and farthest-point Delaunay family of a
Reuleaux polygon.

The Delaunay family F is computed by brute force over vertex triples: a
subset T (|T| >= 3) is a face exactly when some disk containing every vertex
touches its boundary at precisely the vertices of T.  Cocircular triples are
merged into one face when the circumcenters and radii agree within
10x the equality tolerance; that threshold is the single source of truth for
degeneracy, and regular polygons exercise the fully merged path.

The diagram restricted to the polygon is a tree: its internal nodes are the
disk centers c_T, its leaves are the polygon vertices.  Two internal nodes
are adjacent when their faces share a side; the leaf for vertex p_i hangs off
the face whose hull contains the boundary side p_j p_{j+1} with opposite
vertex p_i (the unique vertex at distance 1 from both side ends).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, NotATree
from .geom import EQ_TOL, circumcircle
from .errors import CollinearInput


@dataclass(frozen=True)
class DelaunayFace:
    """A cocircular vertex set with its circumscribed disk (center, radius)."""

    indices: tuple  # sorted vertex indices, |indices| >= 3
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))


@dataclass(frozen=True)
class FarthestPointDiagram:
    """Delaunay family, Voronoi tree and per-vertex cells of a polygon.

    Tree nodes are tagged tuples ("face", j) for internal nodes and
    ("vertex", i) for leaves.
    """

    polygon: object
    faces: tuple
    tree_edges: tuple
    cells: dict  # vertex index -> (k, 2) convex polygon containing the cell

    @property
    def node_count(self):
        return len(self.faces) + self.polygon.n


def delaunay_family(poly, tol=EQ_TOL):
    """All faces of the farthest-point Delaunay family, canonically sorted."""
    pts = poly.vertices
    n = poly.n
    merge_tol = 10.0 * tol

    cands = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                try:
                    c, r = circumcircle(pts[i], pts[j], pts[k], tol)
                except CollinearInput:
                    continue
                d = np.linalg.norm(pts - c, axis=1)
                if d.max() <= r + tol:
                    cands.append((c, r))
    if not cands:
        raise DegenerateInput("no containing circumcircle found")

    # cluster coincident circles (cocircular merging)
    reps = []  # (center, radius, count)
    for c, r in cands:
        for idx, (cc, rr, cnt) in enumerate(reps):
            if np.linalg.norm(c - cc) <= merge_tol and abs(r - rr) <= merge_tol:
                reps[idx] = ((cc * cnt + c) / (cnt + 1), (rr * cnt + r) / (cnt + 1), cnt + 1)
                break
            if np.linalg.norm(c - cc) <= merge_tol or abs(r - rr) <= merge_tol:
                raise DegenerateInput(
                    "circumcircles agree in center or radius but not both at merge scale")
        else:
            reps.append((c, r, 1))

    faces = []
    for c, r, _ in reps:
        d = np.linalg.norm(pts - c, axis=1)
        on = np.abs(d - r) <= tol
        near = (np.abs(d - r) > tol) & (np.abs(d - r) <= merge_tol)
        if near.any():
            raise DegenerateInput(
                f"vertex distance to disk boundary inside the ambiguity band "
                f"(tol, 10*tol] for face near center {c.tolist()}")
        idx = tuple(int(t) for t in np.nonzero(on)[0])
        if len(idx) < 3:
            continue
        faces.append(DelaunayFace(idx, c, float(r)))

    faces.sort(key=lambda f: f.indices)
    return faces


def face_hull_area(poly, face):
    """Area of the convex hull of one face's vertices (they are cocircular)."""
    pts = poly.vertices[list(face.indices)]
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    p = pts[np.argsort(ang)]
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


def convex_hull_area(points):
    """Shoelace area of the convex hull of 2-d points in convex position."""
    c = points.mean(axis=0)
    ang = np.arctan2(points[:, 1] - c[1], points[:, 0] - c[0])
    p = points[np.argsort(ang)]
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


def _clip_halfplane(polygon, a, b):
    """Sutherland-Hodgman clip of a convex polygon by {x : a . x >= b}."""
    out = []
    m = len(polygon)
    for i in range(m):
        p, q = polygon[i], polygon[(i + 1) % m]
        fp, fq = float(a @ p - b), float(a @ q - b)
        if fp >= 0.0:
            out.append(p)
            if fq < 0.0:
                out.append(p + (q - p) * (fp / (fp - fq)))
        elif fq >= 0.0:
            out.append(p + (q - p) * (fp / (fp - fq)))
    return np.array(out) if out else np.zeros((0, 2))


def cell_polygon(poly, i, box=2.5):
    """Convex polygon containing the farthest-point cell of vertex i.

    Intersection of the half-planes where p_i is at least as far as every
    other vertex, clipped to a generous bounding box (the genuine cell is
    this region intersected with the polygon; its curved side is the
    boundary arc centered at p_i).
    """
    verts = poly.vertices
    region = np.array([[-box, -box], [box, -box], [box, box], [-box, box]])
    pi = verts[i]
    for j in range(poly.n):
        if j == i:
            continue
        pj = verts[j]
        a = 2.0 * (pj - pi)
        b = float(pj @ pj - pi @ pi)
        region = _clip_halfplane(region, a, b)
        if len(region) == 0:
            break
    return region


def farthest_vertex_ok(poly, point, i, tol=EQ_TOL):
    """True when vertex i is (weakly) the farthest vertex from ``point``."""
    d = np.linalg.norm(poly.vertices - np.asarray(point, dtype=float), axis=1)
    return d[i] >= d.max() - tol


def voronoi_tree(poly, faces=None, tol=EQ_TOL):
    """Assemble the farthest-point Voronoi tree and cells for a polygon."""
    if faces is None:
        faces = delaunay_family(poly, tol)
    n = poly.n
    edges = []

    for a in range(len(faces)):
        for b in range(a + 1, len(faces)):
            shared = set(faces[a].indices) & set(faces[b].indices)
            if len(shared) >= 3:
                raise DegenerateInput("two distinct faces share three cocircular vertices")
            if len(shared) == 2:
                edges.append((("face", a), ("face", b)))

    # leaf rule: boundary side (j, j+1) attaches leaf p_i with i opposite to it
    for j in range(n):
        side = {j, (j + 1) % n}
        i = poly.opposite(j)
        holders = [k for k, f in enumerate(faces) if side <= set(f.indices)]
        if len(holders) != 1:
            raise NotATree(f"boundary side {sorted(side)} lies in {len(holders)} faces")
        edges.append((("vertex", i), ("face", holders[0])))

    nodes = [("face", k) for k in range(len(faces))] + [("vertex", i) for i in range(n)]
    if len(edges) != len(nodes) - 1 or not _connected(nodes, edges):
        raise NotATree(f"{len(nodes)} nodes, {len(edges)} edges: not a tree")

    cells = {i: cell_polygon(poly, i) for i in range(n)}
    return FarthestPointDiagram(polygon=poly, faces=tuple(faces),
                                tree_edges=tuple(edges), cells=cells)


def _connected(nodes, edges):
    adj = {u: [] for u in nodes}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(nodes)
