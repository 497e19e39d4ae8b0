"""Dataset ingestion (GeoJSON), boundary densification and result output
(JSON + SVG with text-on-path)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .errors import GeometryError, ParseError, ValidationError
from .geometry import AreaShape, Ring, normalize_angle
from .labeler import LabelResult, band_outline_points
from .placement import Placement


@dataclass(frozen=True)
class DatasetArea:
    id: str
    name: str
    shape: AreaShape


@dataclass(frozen=True)
class Dataset:
    areas: tuple[DatasetArea, ...]
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [a.id for a in self.areas]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate area ids in dataset")

    @property
    def total_vertices(self) -> int:
        return sum(a.shape.vertex_count for a in self.areas)


def _ring_from_geojson(coords, where: str) -> Ring:
    try:
        return Ring(coords)
    except GeometryError as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _shape_from_rings(rings, where: str) -> AreaShape:
    if not rings:
        raise ValidationError(f"{where}: polygon has no rings")
    outer = _ring_from_geojson(rings[0], f"{where} ring 0")
    holes = [_ring_from_geojson(r, f"{where} ring {i + 1}")
             for i, r in enumerate(rings[1:])]
    shape = AreaShape(outer, holes)
    try:
        shape.validate()
    except GeometryError as exc:
        raise ValidationError(f"{where}: {exc}") from exc
    return shape


def read_geojson(data: bytes | str, name_key: str = "name") -> Dataset:
    """Parse a FeatureCollection into a Dataset.

    Each Polygon feature becomes one area; each MultiPolygon part becomes its
    own area sharing the feature's name (island parts are labelled
    separately).
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno,
                         offset=exc.colno) from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ValidationError("expected a GeoJSON FeatureCollection")

    areas: list[DatasetArea] = []
    for fi, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry") or {}
        props = feature.get("properties") or {}
        fid = str(feature.get("id", fi))
        name = str(props.get(name_key, fid))
        gtype = geom.get("type")
        if gtype == "Polygon":
            shape = _shape_from_rings(geom.get("coordinates", []), f"feature {fid}")
            areas.append(DatasetArea(fid, name, shape))
        elif gtype == "MultiPolygon":
            parts = geom.get("coordinates", [])
            for pi, rings in enumerate(parts):
                shape = _shape_from_rings(rings, f"feature {fid} part {pi}")
                areas.append(DatasetArea(f"{fid}:{pi}", name, shape))
        else:
            continue  # non-areal features are ignored
    return Dataset(tuple(areas), source={"features": len(doc.get("features", []))})


def _densify_ring(ring: Ring, max_edge: float) -> Ring:
    coords = ring.coords
    nxt = np.roll(coords, -1, axis=0)
    lengths = np.hypot(*(nxt - coords).T)
    pieces = np.maximum(1, np.ceil(lengths / max_edge - 1e-12).astype(int))
    if (pieces == 1).all():
        return ring
    out = []
    for p, q, n in zip(coords, nxt, pieces):
        out.append(p)
        if n > 1:
            t = np.arange(1, n) / n
            out.extend(p + t[:, None] * (q - p))
    return Ring(np.asarray(out))


def densify_boundary(area: AreaShape, max_edge: float) -> AreaShape:
    """Subdivide every boundary edge longer than ``max_edge`` into equal parts.

    Original vertices are kept untouched; the boundary point set is unchanged.
    """
    if max_edge <= 0:
        raise ValueError("max_edge must be positive")
    return AreaShape(_densify_ring(area.outer, max_edge),
                     [_densify_ring(h, max_edge) for h in area.holes])


def results_to_dict(results: list[LabelResult]) -> dict:
    areas = []
    for r in results:
        entry: dict = {"id": r.area_id, "name": r.name}
        if isinstance(r.best, Placement):
            p = r.best
            entry["status"] = "labeled"
            entry["circle"] = {"cx": p.circle.center.x, "cy": p.circle.center.y,
                               "r": p.circle.radius}
            entry["center_angle"] = p.center_angle
            entry["extent"] = p.extent
            entry["L"] = p.length
            entry["H"] = p.height
            entry["binding"] = p.binding
        else:
            entry["status"] = "nofit"
        areas.append(entry)
    return {"areas": areas}


def write_results_json(results: list[LabelResult]) -> bytes:
    """Serialize results; floats keep full round-trip precision."""
    return json.dumps(results_to_dict(results), indent=2).encode("utf-8")


def read_results_json(data: bytes | str) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return json.loads(data)


def _svg_path_of_area(shape: AreaShape, flip_y: float) -> str:
    parts = []
    for ring in shape.rings:
        cs = ring.coords
        head = f"M {cs[0][0]:.3f} {flip_y - cs[0][1]:.3f} "
        body = " ".join(f"L {x:.3f} {flip_y - y:.3f}" for x, y in cs[1:])
        parts.append(head + body + " Z")
    return " ".join(parts)


def _svg_arc_path(p: Placement, flip_y: float) -> str:
    """Baseline arc path, oriented so the text is not upside down."""
    r = p.circle.radius
    cx, cy = p.circle.center
    a0 = p.center_angle - 0.5 * p.extent
    a1 = p.center_angle + 0.5 * p.extent
    # in SVG (y down) text reads upright when the path runs left to right;
    # equivalently the baseline-midpoint outward normal must not point down
    # in map coordinates
    upright = math.sin(p.center_angle) >= 0.0
    if not upright:
        a0, a1 = a1, a0
    x0, y0 = cx + r * math.cos(a0), cy + r * math.sin(a0)
    x1, y1 = cx + r * math.cos(a1), cy + r * math.sin(a1)
    large = 1 if p.extent > math.pi else 0
    # map CCW becomes clockwise after the y flip; sweep=0 is CCW in map terms
    sweep = 0 if upright else 1
    return (f"M {x0:.4f} {flip_y - y0:.4f} "
            f"A {r:.4f} {r:.4f} 0 {large} {sweep} {x1:.4f} {flip_y - y1:.4f}")


def write_svg(dataset: Dataset, results: list[LabelResult],
              margin_frac: float = 0.02) -> bytes:
    """Render polygons, support baselines, label bands and text-on-path."""
    xs0 = [a.shape.bbox[0] for a in dataset.areas]
    ys0 = [a.shape.bbox[1] for a in dataset.areas]
    xs1 = [a.shape.bbox[2] for a in dataset.areas]
    ys1 = [a.shape.bbox[3] for a in dataset.areas]
    if not xs0:
        return b'<svg xmlns="http://www.w3.org/2000/svg"/>'
    minx, miny, maxx, maxy = min(xs0), min(ys0), max(xs1), max(ys1)
    margin = margin_frac * max(maxx - minx, maxy - miny, 1e-9)
    minx, miny, maxx, maxy = minx - margin, miny - margin, maxx + margin, maxy + margin
    flip = maxy + miny  # y' = flip - y keeps everything inside the viewBox
    by_id = {r.area_id: r for r in results}

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" '
           f'viewBox="{minx:.3f} {miny:.3f} {maxx - minx:.3f} {maxy - miny:.3f}">']
    out.append('<g fill="#e7ecdf" stroke="#7a8071" stroke-width="0.15%" '
               'fill-rule="evenodd">')
    for area in dataset.areas:
        out.append(f'<path d="{_svg_path_of_area(area.shape, flip)}"/>')
    out.append("</g>")

    defs = []
    bands = []
    texts = []
    for i, area in enumerate(dataset.areas):
        r = by_id.get(area.id)
        if r is None or not isinstance(r.best, Placement):
            continue
        p = r.best
        pts = band_outline_points(p, 128)
        n_arc = max(8, int(128 * 0.4))
        ring = np.concatenate([pts[:n_arc], pts[n_arc:2 * n_arc][::-1]])
        band = " ".join(f"{x:.3f},{flip - y:.3f}" for x, y in ring)
        bands.append(f'<polygon points="{band}" fill="#4a6fa5" fill-opacity="0.13" '
                     'stroke="none"/>')
        path_id = f"baseline-{i}"
        defs.append(f'<path id="{path_id}" d="{_svg_arc_path(p, flip)}" fill="none"/>')
        font = 0.72 * p.height
        texts.append(
            f'<text font-family="sans-serif" font-size="{font:.4f}" fill="#1e2a38">'
            f'<textPath href="#{path_id}" startOffset="50%" text-anchor="middle">'
            f"{escape(r.name)}</textPath></text>")
    out.append("<defs>" + "".join(defs) + "</defs>")
    out.extend(bands)
    out.extend(texts)
    out.append("</svg>")
    return "\n".join(out).encode("utf-8")
