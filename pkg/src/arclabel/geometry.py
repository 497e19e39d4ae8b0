"""Planar primitives shared by the whole pipeline.

Points, segments, rings, polygons with holes, circles, angular intervals and
annular bounding boxes, plus the containment predicates everything else is
built on.  All angles are normalized to [0, 2*pi); intervals that cross the
branch cut are represented as up to two intervals where a non-wrapping
representation is required.

Scalar predicates implement a fixed half-open even-odd rule so that points
exactly on the boundary are classified deterministically.  Bulk variants are
backed by GEOS (prepared polygon / STRtree) and classify boundary points as
outside; off the boundary both agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import shapely

from .errors import DegenerateSegment, GeometryError

TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if tuple(self.a) == tuple(self.b):
            raise GeometryError(f"segment endpoints coincide: {self.a}")


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise GeometryError(f"circle radius must be finite and positive, got {self.radius}")

    def point_at(self, theta: float) -> Point:
        return Point(self.center.x + self.radius * math.cos(theta),
                     self.center.y + self.radius * math.sin(theta))


def cross2(u, v):
    """z-component of the cross product of 2-d vectors (supports broadcasting)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def normalize_angle(theta: float) -> float:
    """Map an angle to [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:  # fmod can land exactly on 2*pi
        t = 0.0
    return t


@dataclass(frozen=True)
class AngularInterval:
    """Counter-clockwise interval from ``lo`` to ``hi``.

    After normalization ``lo`` is in [0, 2*pi) and ``hi = lo + span`` with
    span in [0, 2*pi]; ``hi`` may therefore exceed 2*pi for intervals that
    cross the branch cut.
    """

    lo: float
    hi: float

    def __post_init__(self):
        span = self.hi - self.lo
        if not (-1e-12 <= span <= TWO_PI + 1e-9):
            raise GeometryError(f"angular span {span} outside [0, 2*pi]")
        span = min(max(span, 0.0), TWO_PI)
        lo = normalize_angle(self.lo)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", lo + span)

    @property
    def span(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return normalize_angle(self.lo + 0.5 * self.span)

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        t = normalize_angle(theta)
        if t < self.lo:
            t += TWO_PI
        return self.lo - tol <= t <= self.hi + tol

    def pieces(self) -> list[tuple[float, float]]:
        """Non-wrapping (lo, hi) pieces within [0, 2*pi]."""
        if self.hi <= TWO_PI:
            return [(self.lo, self.hi)]
        return [(self.lo, TWO_PI), (0.0, self.hi - TWO_PI)]


@dataclass(frozen=True)
class AnnularBox:
    """Radial interval x angular interval around an implicit center."""

    rmin: float
    rmax: float
    angular: AngularInterval

    def __post_init__(self):
        if not (0.0 <= self.rmin <= self.rmax):
            raise GeometryError(f"bad radial interval [{self.rmin}, {self.rmax}]")


def _as_coords(vertices: Sequence) -> np.ndarray:
    arr = np.asarray(vertices, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GeometryError(f"expected (n, 2) coordinates, got shape {arr.shape}")
    return np.ascontiguousarray(arr)


def ring_signed_area(coords: np.ndarray) -> float:
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True, eq=False)
class Ring:
    """Closed vertex loop; the closing vertex is implicit, never stored."""

    coords: np.ndarray

    def __init__(self, vertices: Sequence):
        coords = _as_coords(vertices)
        if len(coords) > 1 and np.array_equal(coords[0], coords[-1]):
            coords = coords[:-1]
        # drop consecutive duplicates (including the wrap pair)
        keep = np.any(coords != np.roll(coords, 1, axis=0), axis=1)
        coords = coords[keep]
        if len(coords) < 3:
            raise GeometryError(f"ring needs >= 3 distinct vertices, got {len(coords)}")
        if not np.all(np.isfinite(coords)):
            raise GeometryError("ring has non-finite coordinates")
        object.__setattr__(self, "coords", coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, Ring) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    @property
    def signed_area(self) -> float:
        return ring_signed_area(self.coords)

    def reversed(self) -> "Ring":
        return Ring(self.coords[::-1])

    def oriented(self, ccw: bool) -> "Ring":
        if (self.signed_area > 0) == ccw:
            return self
        return self.reversed()


@dataclass(frozen=True, eq=False)
class AreaShape:
    """Polygon with optional holes.  Outer ring CCW, holes CW (normalized)."""

    outer: Ring
    holes: tuple[Ring, ...] = ()

    def __init__(self, outer: Ring | Sequence, holes: Iterable[Ring | Sequence] = ()):
        outer = outer if isinstance(outer, Ring) else Ring(outer)
        holes = tuple(h if isinstance(h, Ring) else Ring(h) for h in holes)
        object.__setattr__(self, "outer", outer.oriented(ccw=True))
        object.__setattr__(self, "holes", tuple(h.oriented(ccw=False) for h in holes))

    @property
    def rings(self) -> tuple[Ring, ...]:
        return (self.outer, *self.holes)

    @cached_property
    def vertices(self) -> np.ndarray:
        """All boundary vertices, outer first then holes, (n, 2)."""
        return np.concatenate([r.coords for r in self.rings], axis=0)

    @cached_property
    def edges(self) -> np.ndarray:
        """All boundary segments as an (e, 2, 2) array."""
        parts = []
        for r in self.rings:
            c = r.coords
            parts.append(np.stack([c, np.roll(c, -1, axis=0)], axis=1))
        return np.concatenate(parts, axis=0)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        v = self.outer.coords
        return (float(v[:, 0].min()), float(v[:, 1].min()),
                float(v[:, 0].max()), float(v[:, 1].max()))

    @property
    def bbox_diagonal(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    @cached_property
    def shapely_polygon(self) -> shapely.Polygon:
        poly = shapely.Polygon(self.outer.coords, [h.coords for h in self.holes])
        shapely.prepare(poly)
        return poly

    @cached_property
    def edge_tree(self) -> shapely.STRtree:
        return shapely.STRtree(shapely.linestrings(self.edges))

    def validate(self) -> None:
        """Full structural check: simple rings, holes inside outer and disjoint."""
        outer_poly = shapely.Polygon(self.outer.coords)
        if not outer_poly.is_valid:
            raise GeometryError("outer ring is not simple")
        hole_polys = [shapely.Polygon(h.coords) for h in self.holes]
        for i, hp in enumerate(hole_polys):
            if not hp.is_valid:
                raise GeometryError(f"hole ring {i} is not simple")
            if not outer_poly.contains_properly(hp):
                raise GeometryError(f"hole ring {i} is not strictly inside the outer ring")
        for i in range(len(hole_polys)):
            for j in range(i + 1, len(hole_polys)):
                if hole_polys[i].intersects(hole_polys[j]):
                    raise GeometryError(f"hole rings {i} and {j} are not disjoint")


def point_in_area(p: Point | tuple[float, float], area: AreaShape) -> bool:
    """Strict interior test via even-odd ray crossing, half-open in y.

    Holes are part of the same edge set, so a point inside a hole has even
    crossing parity and classifies as outside.
    """
    x, y = float(p[0]), float(p[1])
    e = area.edges
    x1, y1 = e[:, 0, 0], e[:, 0, 1]
    x2, y2 = e[:, 1, 0], e[:, 1, 1]
    straddle = (y1 > y) != (y2 > y)
    if not straddle.any():
        return False
    xs1, ys1, xs2, ys2 = x1[straddle], y1[straddle], x2[straddle], y2[straddle]
    xint = xs1 + (y - ys1) * (xs2 - xs1) / (ys2 - ys1)
    return bool(np.count_nonzero(x < xint) % 2)


def points_in_area(xy: np.ndarray, area: AreaShape) -> np.ndarray:
    """Bulk strict-interior test (GEOS prepared polygon).

    Boundary points classify as outside; off the boundary this agrees with
    :func:`point_in_area`.
    """
    xy = np.asarray(xy, dtype=float)
    if xy.size == 0:
        return np.zeros(0, dtype=bool)
    return shapely.contains_xy(area.shapely_polygon, xy[:, 0], xy[:, 1])


def _segments_intersect(seg: np.ndarray, others: np.ndarray) -> np.ndarray:
    """True per row of ``others`` if it intersects ``seg`` (touching counts)."""
    a, b = seg[0], seg[1]
    c, d = others[:, 0, :], others[:, 1, :]
    ab = b - a
    cd = d - c
    d1 = cross2(cd, a - c)
    d2 = cross2(cd, b - c)
    d3 = cross2(ab, c - a)
    d4 = cross2(ab, d - a)
    hit = (d1 * d2 <= 0) & (d3 * d4 <= 0)
    # bbox overlap filters collinear-but-disjoint rows (all cross products 0)
    lo = np.minimum(c, d)
    hi = np.maximum(c, d)
    slo = np.minimum(a, b)
    shi = np.maximum(a, b)
    overlap = np.all((lo <= shi) & (hi >= slo), axis=1)
    return hit & overlap


def segment_in_area(s: Segment, area: AreaShape) -> bool:
    """Both endpoints strictly inside and no boundary segment is crossed."""
    if not (point_in_area(s.a, area) and point_in_area(s.b, area)):
        return False
    seg = np.array([[s.a.x, s.a.y], [s.b.x, s.b.y]])
    return not _segments_intersect(seg, area.edges).any()


def segments_cross_boundary(segs: np.ndarray, area: AreaShape) -> np.ndarray:
    """Bulk boundary-crossing test for an (m, 2, 2) segment array (GEOS STRtree)."""
    segs = np.asarray(segs, dtype=float)
    if len(segs) == 0:
        return np.zeros(0, dtype=bool)
    lines = shapely.linestrings(segs)
    pairs = area.edge_tree.query(lines, predicate="intersects")
    out = np.zeros(len(segs), dtype=bool)
    out[pairs[0]] = True
    return out


def _segment_box(a: np.ndarray, b: np.ndarray, center: np.ndarray) -> tuple[float, float, float, float]:
    """(rmin, rmax, angle_lo, span) of one segment; caller guarantees center off s."""
    v = b - a
    w = center - a
    vv = float(v @ v)
    t = min(max(float(w @ v) / vv, 0.0), 1.0)
    foot = a + t * v
    rmin = float(np.hypot(*(foot - center)))
    rmax = max(float(np.hypot(*(a - center))), float(np.hypot(*(b - center))))
    ta = math.atan2(a[1] - center[1], a[0] - center[0])
    tb = math.atan2(b[1] - center[1], b[0] - center[0])
    # rotation direction of (p(t) - center) is fixed: sign of cross(a - c, v)
    turn = float(cross2(a - center, v))
    if turn >= 0.0:
        lo, other = ta, tb
    else:
        lo, other = tb, ta
    lo = normalize_angle(lo)
    span = normalize_angle(other - lo)
    if span > TWO_PI - 1e-9:
        # endpoints collinear with the center on the same side; span is ~0
        span = 0.0
    return rmin, rmax, lo, span


def annular_bbox(s: Segment, center: Point, _depth: int = 0) -> list[AnnularBox]:
    """Circular bounding box(es) of a segment as seen from ``center``.

    The radial interval is the min/max distance from the center to the
    segment (including the perpendicular foot when it lies on the segment).
    The angular interval covers the subtended angles; results are split at
    the 2*pi branch cut and, defensively, whenever a span exceeds pi.

    Raises DegenerateSegment if the center lies on the segment.
    """
    a = np.array([s.a.x, s.a.y], dtype=float)
    b = np.array([s.b.x, s.b.y], dtype=float)
    c = np.array([center.x, center.y], dtype=float)
    scale = max(np.hypot(*(a - c)), np.hypot(*(b - c)), np.hypot(*(b - a)))
    v = b - a
    t = float((c - a) @ v) / float(v @ v)
    if 0.0 <= t <= 1.0 and abs(cross2(v, c - a)) <= 1e-12 * scale * np.hypot(*v):
        raise DegenerateSegment("center lies on the segment")
    rmin, rmax, lo, span = _segment_box(a, b, c)
    if span > math.pi + 1e-12:
        if _depth >= 32:
            raise DegenerateSegment("cannot split segment into spans <= pi")
        mid = Point(*(0.5 * (a + b)))
        return (annular_bbox(Segment(s.a, mid), center, _depth + 1)
                + annular_bbox(Segment(mid, s.b), center, _depth + 1))
    boxes = []
    for plo, phi in AngularInterval(lo, lo + span).pieces():
        boxes.append(AnnularBox(rmin, rmax, AngularInterval(plo, phi)))
    return boxes
