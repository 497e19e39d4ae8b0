"""Exception types raised by the labeling pipeline."""


class ArcLabelError(Exception):
    """Base class for all arclabel errors."""


class GeometryError(ArcLabelError):
    """Invalid or degenerate geometric input."""


class DegenerateSegment(GeometryError):
    """The reference point lies on the segment; no annular box exists."""


class DegenerateInput(GeometryError):
    """Input too degenerate to process (collinear points, < 3 distinct points, ...)."""


class EmptySkeleton(ArcLabelError):
    """No Voronoi edge survived containment filtering; the area is too small or thin."""


class HeightExceedsDiameter(GeometryError):
    """Requested label height is >= the support circle diameter."""


class ParseError(ArcLabelError):
    """Malformed input document."""

    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        super().__init__(message)
        self.line = line
        self.offset = offset


class ValidationError(ArcLabelError):
    """Structurally valid document with invalid geometry content."""
