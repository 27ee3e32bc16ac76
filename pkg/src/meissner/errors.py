"""Exception types raised by the construction and verification pipeline."""


class GeometryError(Exception):
    """Base class for every construction or validation error in this package."""


class CollinearInput(GeometryError):
    """Circumcircle requested for three (nearly) collinear points."""


class BadDualArc(GeometryError):
    """Dual-arc points are not at unit distance from both wedge endpoints."""


class EvenOrTooSmallN(GeometryError):
    """Reuleaux polygons need an odd vertex count n >= 3."""


class DegenerateInput(GeometryError):
    """Cocircularity merging was ambiguous at tolerance scale."""


class NotATree(GeometryError):
    """Voronoi adjacency graph failed the tree invariants."""


class LiftImaginary(GeometryError):
    """A circumscribed disk has radius >= 1, so the lift height is imaginary."""


class NotStandard(GeometryError):
    """Two faces of the ball polyhedron meet in more than a vertex or one edge."""


class NotInvolutive(GeometryError):
    """The vertex/face duality of the ball polyhedron is not an involution."""


class MetricEmbeddingViolation(GeometryError):
    """Center set is not a valid unit-diameter embedding (distance or degree)."""


class SelfDualEdge(GeometryError):
    """An edge of the singular graph is paired with itself."""


class AmbiguousBottom(GeometryError):
    """Bottom/top surgery cannot break a z-tie; pass an explicit mask."""


class BadMask(GeometryError):
    """Surgery selection does not pick exactly one edge per dual pair."""


class NotWatertight(GeometryError):
    """Mesh has boundary or non-manifold edges, or inconsistent winding."""


class IoError(GeometryError):
    """File could not be read or written."""


class ParseError(GeometryError):
    """File contents could not be parsed; carries line/offset context."""

    def __init__(self, message, line=None, offset=None):
        super().__init__(message)
        self.line = line
        self.offset = offset
