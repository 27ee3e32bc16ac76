"""Edge surgery on ball polyhedra: replace the boundary region around one
edge of each dual pair by a wedge of revolution, producing a constant-width
solid.

For a surgered edge with endpoints (x, y) and circle pair (a, b), the wedge
is the surface of revolution about the line through x and y swept by the
unit-radius arcs from x to y centered along the retained dual arc from a to
b.  The two faces that carried the surgered edge are trimmed back to the
shortest geodesics from x to y on their spheres; those geodesics are exactly
the s = 0 and s = 1 rims of the wedge, so the surgered surface closes up.

The skeleton of the result is the vertex set plus the retained dual arcs,
one arc per pair; the solid equals the intersection of unit balls centered
along the skeleton, which is what the width verification in
:mod:`meissner.analysis` exploits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import AmbiguousBottom, BadMask, SelfDualEdge
from .geom import EQ_TOL, Arc3D

_MASK_MODES = ("bottom", "top", "mask", "edges")


@dataclass(frozen=True)
class DualEdgePair:
    """Indices of two edges exchanged by the duality; edge_a < edge_b."""

    edge_a: int
    edge_b: int


@dataclass(frozen=True)
class SurgeryChoice:
    """Which edge of each dual pair gets surgered.

    mode "bottom"/"top" picks by arc-midpoint height (needs lifted
    z-coordinates); mode "mask" takes one bit per pair (1 = surger edge_a);
    mode "edges" takes an explicit edge index set.
    """

    mode: str = "bottom"
    mask: tuple = None
    edges: frozenset = None

    def __post_init__(self):
        if self.mode not in _MASK_MODES:
            raise BadMask(f"unknown surgery mode {self.mode!r}")


@dataclass(frozen=True)
class Wedge:
    """Revolution surface replacing one surgered edge.

    ``dual_arc`` is the retained arc, oriented so point(0) is vertex a and
    point(1) is vertex b; sigma_a / sigma_b are the shortest geodesics from x
    to y on the spheres of a and b (the wedge rims).
    """

    pair_index: int
    x: int
    y: int
    a: int
    b: int
    dual_arc: Arc3D
    sigma_a: Arc3D
    sigma_b: Arc3D


@dataclass(frozen=True)
class FaceCurve:
    """One boundary curve of a trimmed face.

    kind "arc" is an original edge arc (``ref`` = edge index); kind "trim" is
    a geodesic rim left by surgery (``ref`` = pair index).  ``forward`` tells
    whether the face traverses the stored arc from point(0) to point(1).
    """

    kind: str
    ref: int
    arc: Arc3D
    forward: bool


@dataclass(frozen=True)
class TrimmedFace:
    center: int
    curves: tuple


@dataclass(frozen=True)
class MeissnerSolid:
    """Result of surgery on each dual pair of a ball polyhedron."""

    base: object                 # ReuleauxPolyhedron
    pairs: tuple                 # DualEdgePair
    surgered: tuple              # surgered edge index, one per pair
    wedges: tuple                # Wedge, aligned with pairs
    faces: tuple                 # TrimmedFace per center
    unsurgered_pairs: tuple = () # nonempty only for negative-control fixtures

    @property
    def skeleton_points(self):
        return self.base.vertices

    @property
    def skeleton_arcs(self):
        """Retained dual arcs; for unsurgered pairs both arcs stay sharp."""
        arcs = [w.dual_arc for k, w in enumerate(self.wedges)
                if k not in self.unsurgered_pairs]
        for k in self.unsurgered_pairs:
            pair = self.pairs[k]
            arcs.append(self.base.edges[pair.edge_a].arc)
            arcs.append(self.base.edges[pair.edge_b].arc)
        return tuple(arcs)


def dual_pairs(phi, tol=EQ_TOL):
    """Perfect matching of the edges into dual pairs.

    The dual of the edge carried by circle pair (a, b) is the edge whose
    circle pair is that edge's own endpoint set.  Verifies the four cross
    distances d(x,a) = d(x,b) = d(y,a) = d(y,b) = 1 for every pair.
    """
    by_centers = phi.edge_index_by_centers()
    pairs = []
    seen = set()
    for k, e in enumerate(phi.edges):
        partner = by_centers[frozenset(e.endpoints)]
        if partner == k:
            raise SelfDualEdge(f"edge {k} with endpoints {e.endpoints} is its own dual")
        key = frozenset((k, partner))
        if key in seen:
            continue
        seen.add(key)
        lo, hi = min(k, partner), max(k, partner)
        pairs.append(DualEdgePair(lo, hi))
    if 2 * len(pairs) != len(phi.edges):
        raise SelfDualEdge("dual pairing is not a perfect matching")

    verts = phi.vertices
    for p in pairs:
        x, y = phi.edges[p.edge_a].endpoints
        a, b = phi.edges[p.edge_b].endpoints
        for s in (x, y):
            for t in (a, b):
                d = float(np.linalg.norm(verts[s] - verts[t]))
                if abs(d - 1.0) > tol:
                    raise SelfDualEdge(
                        f"cross distance d(v{s}, v{t}) = {d:.9f} != 1 in dual pair "
                        f"({p.edge_a}, {p.edge_b})")
    pairs.sort(key=lambda p: p.edge_a)
    return tuple(pairs)


def _select_surgered(phi, pairs, choice, tol):
    """Edge index to surger for each pair, per the choice."""
    if choice.mode in ("bottom", "top"):
        out = []
        for p in pairs:
            za = float(phi.edges[p.edge_a].arc.midpoint[2])
            zb = float(phi.edges[p.edge_b].arc.midpoint[2])
            if abs(za - zb) <= tol:
                raise AmbiguousBottom(
                    f"pair ({p.edge_a}, {p.edge_b}) has arc midpoints at equal "
                    f"height z = {za:.9f}; pass an explicit mask")
            lower = p.edge_a if za < zb else p.edge_b
            upper = p.edge_b if lower == p.edge_a else p.edge_a
            out.append(lower if choice.mode == "bottom" else upper)
        return tuple(out)
    if choice.mode == "mask":
        if choice.mask is None or len(choice.mask) != len(pairs):
            raise BadMask(f"mask needs exactly {len(pairs)} bits")
        if any(b not in (0, 1) for b in choice.mask):
            raise BadMask("mask bits must be 0 or 1")
        return tuple(p.edge_a if bit else p.edge_b
                     for p, bit in zip(pairs, choice.mask))
    # explicit edge set
    if choice.edges is None:
        raise BadMask("edges mode needs an explicit edge set")
    chosen = set(choice.edges)
    out = []
    for p in pairs:
        hit = chosen & {p.edge_a, p.edge_b}
        if len(hit) != 1:
            raise BadMask(
                f"selection must pick exactly one edge of pair "
                f"({p.edge_a}, {p.edge_b}); got {sorted(hit)}")
        out.append(hit.pop())
    if chosen - {e for p in pairs for e in (p.edge_a, p.edge_b)}:
        raise BadMask("selection contains unknown edge indices")
    return tuple(out)


def _oriented_dual_arc(phi, retained_idx, a, b):
    """Retained edge's arc oriented from vertex a to vertex b."""
    e = phi.edges[retained_idx]
    if e.endpoints == (a, b):
        return e.arc
    return e.arc.reversed()


def perform_surgery(phi, choice=SurgeryChoice("bottom"), tol=EQ_TOL):
    """Surger one edge of each dual pair and assemble the resulting solid."""
    pairs = dual_pairs(phi, tol)
    surgered = _select_surgered(phi, pairs, choice, tol)

    verts = phi.vertices
    wedges = []
    trim_by_face = {}  # (face center, surgered edge index) -> FaceCurve
    for k, (pair, s_idx) in enumerate(zip(pairs, surgered)):
        r_idx = pair.edge_b if s_idx == pair.edge_a else pair.edge_a
        e_s = phi.edges[s_idx]
        x, y = e_s.endpoints
        a, b = e_s.dual_centers
        dual_arc = _oriented_dual_arc(phi, r_idx, a, b)
        sigma_a = Arc3D.minor_between(verts[a], verts[x], verts[y])
        sigma_b = Arc3D.minor_between(verts[b], verts[x], verts[y])
        wedges.append(Wedge(pair_index=k, x=x, y=y, a=a, b=b,
                            dual_arc=dual_arc, sigma_a=sigma_a, sigma_b=sigma_b))
        trim_by_face[(a, s_idx)] = FaceCurve(kind="trim", ref=k, arc=sigma_a, forward=True)
        trim_by_face[(b, s_idx)] = FaceCurve(kind="trim", ref=k, arc=sigma_b, forward=True)

    surgered_set = set(surgered)
    faces = []
    for f in phi.faces:
        curves = []
        for e_idx, orient in zip(f.edge_cycle, f.orientations):
            if e_idx in surgered_set:
                c = trim_by_face[(f.center, e_idx)]
                # geodesic is stored x -> y; match the face's traversal
                e = phi.edges[e_idx]
                fwd = (orient == 1)  # face walks endpoints[0] -> endpoints[1]
                curves.append(replace(c, forward=fwd))
            else:
                curves.append(FaceCurve(kind="arc", ref=e_idx,
                                        arc=phi.edges[e_idx].arc,
                                        forward=(orient == 1)))
        faces.append(TrimmedFace(center=f.center, curves=tuple(curves)))

    return MeissnerSolid(base=phi, pairs=pairs, surgered=surgered,
                         wedges=tuple(wedges), faces=tuple(faces))


def leave_pair_unsurgered(solid, pair_index):
    """Negative-control fixture: undo the surgery on one pair.

    The returned solid keeps both sharp edges of that pair in its skeleton
    and drops the wedge, which breaks constant width; verification is
    expected to fail on it.
    """
    if not 0 <= pair_index < len(solid.pairs):
        raise BadMask(f"no dual pair {pair_index}")
    return replace(solid, unsurgered_pairs=tuple(sorted(set(solid.unsurgered_pairs) | {pair_index})))


def skeleton(solid):
    """Center set realizing the solid as an intersection of unit balls.

    Returns (points, arcs): the base vertices and the retained dual arcs.
    """
    return solid.skeleton_points, solid.skeleton_arcs


def wedge_grid(wedge, phi_or_verts, s, t):
    """Sample a wedge on a fraction grid; rows follow the dual arc.

    Endpoint rows t = 0 and t = 1 are the exact vertex coordinates.
    """
    from .geom import wedge_family_points

    verts = getattr(phi_or_verts, "vertices", phi_or_verts)
    x, y = verts[wedge.x], verts[wedge.y]
    pts = wedge_family_points(x, y, wedge.dual_arc, s, t)
    t = np.asarray(t, dtype=float)
    pts[:, t <= 0.0, :] = x
    pts[:, t >= 1.0, :] = y
    return pts
