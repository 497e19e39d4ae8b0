"""End-to-end pipeline: skeleton -> candidate paths -> circle fits -> optimal
placements -> verified largest label.

Selection maximizes the label height (equivalently font size), ties broken
toward the larger support radius.  The winner is verified by sampling the
band outline; on failure the extent is bisected down on the same arc before
falling back to the next candidate.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .arcfit import CircleFit, fit_circle
from .errors import DegenerateInput, EmptySkeleton
from .geometry import AreaShape, normalize_angle, points_in_area, segments_cross_boundary
from .pathfinder import CandidatePath, enumerate_paths
from .placement import (
    DEFAULT_BAND_REACH,
    DEFAULT_MAX_EXTENT,
    NoFit,
    Placement,
    extent_to_box,
    optimal_on_arc,
)
from .skeleton import build_skeleton


@dataclass(frozen=True)
class LabelConfig:
    aspect: float = 0.18
    k: int = 8
    max_extent: float = DEFAULT_MAX_EXTENT
    min_height: float = 0.0
    densify: float | None = None      # None: 1/200 of the bbox diagonal
    band_reach: float = DEFAULT_BAND_REACH
    verify_samples: int = 256
    parallel: bool = False


@dataclass(frozen=True)
class PhaseTimings:
    medial_axis: float = 0.0
    paths: float = 0.0
    placement: float = 0.0

    @property
    def total(self) -> float:
        return self.medial_axis + self.paths + self.placement


@dataclass(frozen=True)
class CandidateEval:
    path: CandidatePath
    fit: CircleFit
    placement: Placement | NoFit


@dataclass
class LabelResult:
    area_id: str
    name: str
    best: Placement | NoFit
    candidates: list[CandidateEval] = field(default_factory=list)
    timings: PhaseTimings = PhaseTimings()
    bisected: bool = False
    node_count: int = 0

    @property
    def fitted(self) -> bool:
        return isinstance(self.best, Placement)


def band_outline_points(p: Placement, samples: int) -> np.ndarray:
    """Sample points along the label band outline (two arcs, two end caps)."""
    r = p.circle.radius
    h2 = 0.5 * p.height
    a0 = p.center_angle - 0.5 * p.extent
    a1 = p.center_angle + 0.5 * p.extent
    n_arc = max(8, int(samples * 0.4))
    n_cap = max(2, (samples - 2 * n_arc) // 2)
    cx, cy = p.circle.center
    thetas = np.linspace(a0, a1, n_arc)
    pts = []
    for radius in (r - h2, r + h2):
        pts.append(np.stack([cx + radius * np.cos(thetas),
                             cy + radius * np.sin(thetas)], axis=1))
    radii = np.linspace(r - h2, r + h2, n_cap)
    for theta in (a0, a1):
        pts.append(np.stack([cx + radii * np.cos(theta),
                             cy + radii * np.sin(theta)], axis=1))
    return np.concatenate(pts, axis=0)


def verify_containment(p: Placement, area: AreaShape, samples: int = 256) -> bool:
    """All sampled outline points inside and no outline chord crossing the boundary."""
    if samples < 16:
        raise ValueError("samples must be >= 16")
    pts = band_outline_points(p, samples)
    if not points_in_area(pts, area).all():
        return False
    # outline approximated by chords between consecutive samples of each piece
    n_arc = max(8, int(samples * 0.4))
    n_cap = max(2, (samples - 2 * n_arc) // 2)
    chords = []
    offset = 0
    for n in (n_arc, n_arc, n_cap, n_cap):
        piece = pts[offset:offset + n]
        if len(piece) >= 2:
            chords.append(np.stack([piece[:-1], piece[1:]], axis=1))
        offset += n
    segs = np.concatenate(chords, axis=0)
    keep = np.hypot(*(segs[:, 1] - segs[:, 0]).T) > 0
    return not segments_cross_boundary(segs[keep], area).any()


def _shrink_to_fit(p: Placement, area: AreaShape, config: LabelConfig,
                   max_steps: int = 40) -> Placement | None:
    """Bisect the extent down on the same arc until the band is contained."""
    lo, hi = 0.0, p.extent
    best = None
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        if mid <= 0.0:
            break
        length, height = extent_to_box(mid, p.circle.radius, config.aspect)
        trial = replace(p, extent=mid, length=length, height=height)
        if verify_containment(trial, area, config.verify_samples):
            best = trial
            lo = mid
        else:
            hi = mid
    return best


def _placement_sort_key(c: CandidateEval):
    p = c.placement
    assert isinstance(p, Placement)
    return (-p.height, -p.circle.radius)


def label_area(area: AreaShape, aspect: float | None = None, k: int | None = None,
               config: LabelConfig | None = None, area_id: str = "0",
               name: str = "") -> LabelResult:
    """Compute the largest verified label for one area."""
    cfg = config or LabelConfig()
    if aspect is not None:
        cfg = replace(cfg, aspect=aspect)
    if k is not None:
        cfg = replace(cfg, k=k)

    result = LabelResult(area_id=area_id, name=name, best=NoFit("unprocessed"),
                         node_count=area.vertex_count)

    t0 = time.perf_counter()
    try:
        graph = build_skeleton(area)
    except (EmptySkeleton, DegenerateInput) as exc:
        t1 = time.perf_counter()
        result.best = NoFit(f"empty_skeleton: {exc}")
        result.timings = PhaseTimings(medial_axis=t1 - t0)
        return result
    t1 = time.perf_counter()

    paths = enumerate_paths(graph, cfg.k, cfg.aspect)
    fits: list[tuple[CandidatePath, CircleFit]] = []
    for path in paths:
        try:
            fits.append((path, fit_circle(path.positions(graph))))
        except DegenerateInput:
            continue
    t2 = time.perf_counter()

    evals = [CandidateEval(path, fit,
                           optimal_on_arc(fit.circle, area, cfg.aspect,
                                          max_extent=cfg.max_extent,
                                          min_height=cfg.min_height,
                                          band_reach=cfg.band_reach))
             for path, fit in fits]

    fitted = sorted((c for c in evals if isinstance(c.placement, Placement)),
                    key=_placement_sort_key)
    best: Placement | NoFit = NoFit("no_candidates" if not evals else "blocked")
    bisected = False
    best_height = -math.inf
    for cand in fitted:
        p = cand.placement
        if p.height <= best_height:
            break  # candidates sorted by height; nothing better remains
        if verify_containment(p, area, cfg.verify_samples):
            best, best_height = p, p.height
            break
        shrunk = _shrink_to_fit(p, area, cfg)
        if shrunk is not None and shrunk.height > best_height:
            best, best_height = shrunk, shrunk.height
            bisected = True
    if isinstance(best, Placement) and best.height < cfg.min_height:
        best = NoFit("below_min_height")
    t3 = time.perf_counter()

    result.best = best
    result.candidates = evals
    result.bisected = bisected and isinstance(best, Placement)
    result.timings = PhaseTimings(medial_axis=t1 - t0, paths=t2 - t1,
                                  placement=t3 - t2)
    return result


def label_dataset(dataset, config: LabelConfig | None = None) -> list[LabelResult]:
    """Label every area of a dataset; results come back in input order."""
    from .geojson_io import densify_boundary  # local import to avoid a cycle

    cfg = config or LabelConfig()

    def one(item) -> LabelResult:
        max_edge = cfg.densify
        if max_edge is None:
            max_edge = item.shape.bbox_diagonal / 200.0
        shape = densify_boundary(item.shape, max_edge) if max_edge > 0 else item.shape
        return label_area(shape, config=cfg, area_id=item.id, name=item.name)

    if cfg.parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor() as pool:
            return list(pool.map(one, dataset.areas))
    return [one(item) for item in dataset.areas]
