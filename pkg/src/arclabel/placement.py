"""Optimal label placement along a support circle.

Every boundary segment constrains the label through its annular bounding
box: a "wedge", a continuous three-piece linear function of the label-center
angle with slopes -2, 0, +2 giving the maximum angular extent the label may
have at that angle.  Feasible-interval endpoints act as zero-base wedges.
The maximizer of the lower envelope is found with an ascending sweep over
wedge activation heights: at extent h a wedge blocks the open interval
(beta1 - h/2, beta2 + h/2) around its segment's angular shadow, so in
shadow coordinates blockers are static and the sweep reduces to maintaining
merged blocked segments and the surviving gaps between them.

A dense-grid brute force over the same constraint model serves as the
validation oracle.
"""

from __future__ import annotations

import heapq
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import HeightExceedsDiameter
from .geometry import (
    TWO_PI,
    AngularInterval,
    AnnularBox,
    AreaShape,
    Circle,
    cross2,
    normalize_angle,
    point_in_area,
)

DEFAULT_MAX_EXTENT = math.pi / 3.0  # keep the circular angle under 60 degrees
DEFAULT_BAND_REACH = 0.5            # band is centered on the baseline: H/2 per side
_TIE_TOL = 1e-9


@dataclass(frozen=True)
class Wedge:
    """Per-segment placement constraint: flat bottom, outer slopes +-2."""

    base_extent: float
    flat: AngularInterval

    def value(self, alpha_l: float) -> float:
        """Maximum label extent when the label center sits at ``alpha_l``."""
        best = math.inf
        for lo, hi in self.flat.pieces():
            t = normalize_angle(alpha_l)
            for shift in (-TWO_PI, 0.0, TWO_PI):
                u = t + shift
                dist = max(0.0, lo - u, u - hi)
                best = min(best, self.base_extent + 2.0 * dist)
        return best


@dataclass(frozen=True)
class Placement:
    circle: Circle
    center_angle: float
    extent: float
    length: float
    height: float
    binding: str


@dataclass(frozen=True)
class NoFit:
    reason: str


def alpha_for_height(h: float, r: float, aspect: float) -> float:
    """Angular extent at which the label height equals ``h``."""
    if h >= 2.0 * r:
        raise HeightExceedsDiameter(f"height {h} >= diameter {2 * r}")
    if h <= 0.0:
        raise ValueError("height must be positive")
    return h / (aspect * (r - 0.5 * h))


def extent_to_box(alpha: float, r: float, aspect: float) -> tuple[float, float]:
    """(L, H) solving H = A*L and L = (r - H/2)*alpha simultaneously."""
    if alpha < 0.0:
        raise ValueError("extent must be >= 0")
    length = r * alpha / (1.0 + 0.5 * aspect * alpha)
    return length, aspect * length


def make_wedge(bbox: AnnularBox, circle: Circle, aspect: float,
               band_reach: float = 1.0) -> Wedge | None:
    """Wedge of one boxed segment, or None when it can never interfere.

    ``band_reach`` is the fraction of the label height the band extends from
    the baseline toward the segment; the segment interferes once
    band_reach * H >= d_s.
    """
    r = circle.radius
    if bbox.rmin <= r <= bbox.rmax:
        d = 0.0
    elif r < bbox.rmin:
        d = bbox.rmin - r
    else:
        d = r - bbox.rmax
    d_eff = d / band_reach
    if d_eff >= r:
        return None
    base = 0.0 if d == 0.0 else alpha_for_height(d_eff, r, aspect)
    lo = bbox.angular.lo - 0.5 * base
    span = min(bbox.angular.span + base, TWO_PI)
    return Wedge(base_extent=base, flat=AngularInterval(lo, lo + span))


def feasible_intervals(circle: Circle, area: AreaShape) -> list[AngularInterval]:
    """Maximal arcs of the circle strictly inside the area."""
    c = np.array([circle.center.x, circle.center.y])
    r = circle.radius
    e = area.edges
    a = e[:, 0, :] - c
    v = e[:, 1, :] - e[:, 0, :]
    qa = np.einsum("ij,ij->i", v, v)
    qb = 2.0 * np.einsum("ij,ij->i", a, v)
    qc = np.einsum("ij,ij->i", a, a) - r * r
    disc = qb * qb - 4.0 * qa * qc
    hit = disc >= 0.0
    angles: list[float] = []
    if hit.any():
        sq = np.sqrt(disc[hit])
        den = 2.0 * qa[hit]
        for ts in ((-qb[hit] - sq) / den, (-qb[hit] + sq) / den):
            ok = (ts >= 0.0) & (ts <= 1.0)
            pts = a[hit][ok] + ts[ok, None] * v[hit][ok]
            angles.extend(np.arctan2(pts[:, 1], pts[:, 0]).tolist())
    if not angles:
        if point_in_area(circle.point_at(0.0), area):
            return [AngularInterval(0.0, TWO_PI)]
        return []

    cuts = np.array(sorted(normalize_angle(t) for t in angles))
    keep = np.ones(len(cuts), dtype=bool)
    keep[1:] = np.diff(cuts) > 1e-12
    cuts = cuts[keep]
    if len(cuts) > 1 and (cuts[0] + TWO_PI) - cuts[-1] <= 1e-12:
        cuts = cuts[:-1]

    n = len(cuts)
    gap_lo = cuts
    gap_span = np.diff(np.append(cuts, cuts[0] + TWO_PI))
    mids = gap_lo + 0.5 * gap_span
    inside = [point_in_area(circle.point_at(m), area) for m in mids]
    if all(inside):
        return [AngularInterval(0.0, TWO_PI)]
    if not any(inside):
        return []

    # merge cyclic runs of inside gaps, starting after an outside gap
    start = next(i for i in range(n) if not inside[i])
    intervals = []
    i = (start + 1) % n
    run_lo = None
    run_span = 0.0
    for _ in range(n):
        if inside[i]:
            if run_lo is None:
                run_lo = gap_lo[i]
                run_span = 0.0
            run_span += gap_span[i]
        else:
            if run_lo is not None:
                intervals.append(AngularInterval(run_lo, run_lo + run_span))
                run_lo = None
        i = (i + 1) % n
    if run_lo is not None:
        intervals.append(AngularInterval(run_lo, run_lo + run_span))
    intervals.sort(key=lambda iv: iv.lo)
    return intervals


def _wedge_pieces(area: AreaShape, circle: Circle, aspect: float,
                  band_reach: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(wlo, whi, base) arrays: non-wrapping shadow pieces of all wedges."""
    c = np.array([circle.center.x, circle.center.y])
    r = circle.radius
    e = area.edges
    a = e[:, 0, :] - c
    b = e[:, 1, :] - c
    v = b - a
    vv = np.einsum("ij,ij->i", v, v)
    t = np.clip(-np.einsum("ij,ij->i", a, v) / vv, 0.0, 1.0)
    foot = a + t[:, None] * v
    rmin = np.hypot(foot[:, 0], foot[:, 1])
    ra = np.hypot(a[:, 0], a[:, 1])
    rb = np.hypot(b[:, 0], b[:, 1])
    rmax = np.maximum(ra, rb)

    d = np.where(rmin > r, rmin - r, np.where(rmax < r, r - rmax, 0.0))
    d_eff = d / band_reach
    relevant = d_eff < r
    if not relevant.any():
        return (np.empty(0), np.empty(0), np.empty(0))

    base = np.zeros(len(e))
    pos = relevant & (d > 0.0)
    base[pos] = d_eff[pos] / (aspect * (r - 0.5 * d_eff[pos]))

    ta = np.arctan2(a[:, 1], a[:, 0])
    tb = np.arctan2(b[:, 1], b[:, 0])
    turn = cross2(a, v)
    lo = np.where(turn >= 0.0, ta, tb)
    other = np.where(turn >= 0.0, tb, ta)
    lo = np.mod(lo, TWO_PI)
    span = np.mod(other - lo, TWO_PI)
    span[span > TWO_PI - 1e-9] = 0.0

    scale = max(float(rmax.max()), r)
    degenerate = relevant & ((rmin <= 1e-12 * scale) | (span > math.pi + 1e-9))
    normal = relevant & ~degenerate

    wlo: list[np.ndarray] = []
    whi: list[np.ndarray] = []
    wb: list[np.ndarray] = []

    nlo, nspan, nbase = lo[normal], span[normal], base[normal]
    nhi = nlo + nspan
    plain = nhi <= TWO_PI
    wlo.append(nlo[plain])
    whi.append(nhi[plain])
    wb.append(nbase[plain])
    wrap = ~plain
    wlo.append(nlo[wrap])
    whi.append(np.full(int(wrap.sum()), TWO_PI))
    wb.append(nbase[wrap])
    wlo.append(np.zeros(int(wrap.sum())))
    whi.append(nhi[wrap] - TWO_PI)
    wb.append(nbase[wrap])

    if degenerate.any():
        # boundary through (or numerically at) the center: block everything
        # at this wedge's activation height
        nd = int(degenerate.sum())
        wlo.append(np.zeros(nd))
        whi.append(np.full(nd, TWO_PI))
        wb.append(base[degenerate])

    return (np.concatenate(wlo), np.concatenate(whi), np.concatenate(wb))


def _sweep_interval(lo: float, hi: float, wlo: np.ndarray, whi: np.ndarray,
                    wbase: np.ndarray, cap: float, with_ends: bool):
    """Exact max of the wedge lower envelope over [lo, hi].

    Returns (extent, alpha, dist_to_midpoint, binding).
    """
    mid = 0.5 * (lo + hi)
    candidates: list[tuple[float, float, float, str]] = []

    def record(gleft: float, gright: float, limit: float):
        h = min(gright - gleft, cap) if limit is None else min(limit, gright - gleft, cap)
        if h < 0.0:
            return
        alo, ahi = gleft + 0.5 * h, gright - 0.5 * h
        alpha = min(max(mid, alo), ahi)
        if h >= cap:
            tag = "cap"
        elif limit is not None and h >= limit:
            tag = "wedge"
        elif with_ends and (gleft == lo or gright == hi):
            tag = "interval-end"
        else:
            tag = "wedge"
        candidates.append((h, alpha, abs(alpha - mid), tag))

    big = (hi - lo) + 4.0 * TWO_PI + cap + 10.0
    seg_start = [lo - big, hi]
    seg_end = [lo, hi + big]
    gaps: dict[float, float] = {lo: hi}
    heap: list[tuple[float, float, float]] = [(-(hi - lo), lo, hi)]

    order = np.lexsort((whi, wlo, wbase))
    for i in order:
        b = float(wbase[i])
        a1 = float(wlo[i])
        a2 = float(whi[i])
        while heap and gaps.get(heap[0][1]) != heap[0][2]:
            heapq.heappop(heap)
        if not heap:
            break
        best_open = min(-heap[0][0], cap)
        if b >= best_open:
            break

        li = bisect_left(seg_end, a1)
        ri = bisect_right(seg_start, a2) - 1
        if li > ri:
            # no overlap with active segments: plain insertion after ri
            gl, gr = seg_end[ri], seg_start[ri + 1]
            if gaps.pop(gl, None) is not None:
                record(gl, gr, b)
            seg_start.insert(ri + 1, a1)
            seg_end.insert(ri + 1, a2)
            for ngl, ngr in ((gl, a1), (a2, gr)):
                if ngr - ngl > 0.0:
                    gaps[ngl] = ngr
                    heapq.heappush(heap, (-(ngr - ngl), ngl, ngr))
        else:
            new_start = min(a1, seg_start[li])
            new_end = max(a2, seg_end[ri])
            for j in range(li, ri):
                gl, gr = seg_end[j], seg_start[j + 1]
                if gaps.pop(gl, None) is not None:
                    record(gl, gr, b)
            if a1 < seg_start[li]:
                gl, gr = seg_end[li - 1], seg_start[li]
                if gaps.pop(gl, None) is not None:
                    record(gl, gr, b)
                    if new_start - gl > 0.0:
                        gaps[gl] = new_start
                        heapq.heappush(heap, (-(new_start - gl), gl, new_start))
            if a2 > seg_end[ri]:
                gl, gr = seg_end[ri], seg_start[ri + 1]
                if gaps.pop(gl, None) is not None:
                    record(gl, gr, b)
                    if gr - new_end > 0.0:
                        gaps[new_end] = gr
                        heapq.heappush(heap, (-(gr - new_end), new_end, gr))
            seg_start[li:ri + 1] = [new_start]
            seg_end[li:ri + 1] = [new_end]

    for gl, gr in gaps.items():
        record(gl, gr, None)

    if not candidates:
        return 0.0, mid, 0.0, "blocked"
    h_best = max(c[0] for c in candidates)
    tol_h = _TIE_TOL * (1.0 + abs(h_best))
    pool = [c for c in candidates if c[0] >= h_best - tol_h]
    d_min = min(c[2] for c in pool)
    tol_d = _TIE_TOL * (1.0 + hi - lo)
    pool = [c for c in pool if c[2] <= d_min + tol_d]
    pick = min(pool, key=lambda c: c[1])
    return h_best, pick[1], pick[2], pick[3]


def _pieces_for_interval(lo: float, hi: float, wlo: np.ndarray, whi: np.ndarray,
                         wbase: np.ndarray):
    """Shadow pieces shifted into the frame of a bounded interval [lo, hi)."""
    outs = []
    for shift in (0.0, TWO_PI):
        s_lo, s_hi = wlo + shift, whi + shift
        keep = (s_lo < hi) & (s_hi > lo)
        outs.append((s_lo[keep], s_hi[keep], wbase[keep]))
    return (np.concatenate([o[0] for o in outs]),
            np.concatenate([o[1] for o in outs]),
            np.concatenate([o[2] for o in outs]))


def _full_circle_frame(wlo: np.ndarray, whi: np.ndarray, wbase: np.ndarray):
    """Rotate pieces so the cut sits at the lowest-base wedge's left end."""
    i = int(np.lexsort((whi, wlo, wbase))[0])
    chi = float(wlo[i])
    rel_lo = np.mod(wlo - chi, TWO_PI)
    rel_hi = rel_lo + (whi - wlo)
    plain = rel_hi <= TWO_PI
    parts_lo = [rel_lo[plain]]
    parts_hi = [rel_hi[plain]]
    parts_b = [wbase[plain]]
    wrap = ~plain
    nwrap = int(wrap.sum())
    parts_lo.extend([rel_lo[wrap], np.zeros(nwrap)])
    parts_hi.extend([np.full(nwrap, TWO_PI), rel_hi[wrap] - TWO_PI])
    parts_b.extend([wbase[wrap], wbase[wrap]])
    return (chi, np.concatenate(parts_lo), np.concatenate(parts_hi),
            np.concatenate(parts_b))


def _finish(circle: Circle, aspect: float, extent: float, alpha: float,
            binding: str, min_height: float) -> Placement | NoFit:
    if extent <= 0.0:
        return NoFit("blocked")
    length, height = extent_to_box(extent, circle.radius, aspect)
    if height < min_height:
        return NoFit("below_min_height")
    return Placement(circle=circle, center_angle=normalize_angle(alpha),
                     extent=extent, length=length, height=height, binding=binding)


def optimal_on_arc(circle: Circle, area: AreaShape, aspect: float,
                   max_extent: float = DEFAULT_MAX_EXTENT,
                   min_height: float = 0.0,
                   band_reach: float = DEFAULT_BAND_REACH) -> Placement | NoFit:
    """Largest label extent over all feasible intervals, via the wedge sweep."""
    intervals = feasible_intervals(circle, area)
    if not intervals:
        return NoFit("support circle outside the area")
    cap = min(2.0 / aspect, max_extent)
    wlo, whi, wbase = _wedge_pieces(area, circle, aspect, band_reach)

    results = []
    for iv in intervals:
        if iv.span >= TWO_PI:
            if len(wlo) == 0:
                results.append((cap, iv.lo + math.pi, 0.0, "cap"))
                continue
            chi, rlo, rhi, rb = _full_circle_frame(wlo, whi, wbase)
            h, alpha, dist, tag = _sweep_interval(0.0, TWO_PI, rlo, rhi, rb,
                                                  cap, with_ends=True)
            results.append((h, chi + alpha, dist, tag))
        else:
            plo, phi, pb = _pieces_for_interval(iv.lo, iv.hi, wlo, whi, wbase)
            h, alpha, dist, tag = _sweep_interval(iv.lo, iv.hi, plo, phi, pb,
                                                  cap, with_ends=True)
            results.append((h, alpha, dist, tag))

    h_best = max(r[0] for r in results)
    tol_h = _TIE_TOL * (1.0 + abs(h_best))
    pool = [r for r in results if r[0] >= h_best - tol_h]
    d_min = min(r[2] for r in pool)
    pool = [r for r in pool if r[2] <= d_min + _TIE_TOL]
    pick = min(pool, key=lambda r: normalize_angle(r[1]))
    return _finish(circle, aspect, h_best, pick[1], pick[3], min_height)


def optimal_on_arc_bruteforce(circle: Circle, area: AreaShape, aspect: float,
                              grid: int = 100_000,
                              max_extent: float = DEFAULT_MAX_EXTENT,
                              min_height: float = 0.0,
                              band_reach: float = DEFAULT_BAND_REACH) -> Placement | NoFit:
    """Validation oracle: evaluate the envelope on a dense angle grid."""
    if grid < 100:
        raise ValueError("grid must be >= 100")
    intervals = feasible_intervals(circle, area)
    if not intervals:
        return NoFit("support circle outside the area")
    cap = min(2.0 / aspect, max_extent)
    wlo, whi, wbase = _wedge_pieces(area, circle, aspect, band_reach)
    flat_lo = wlo - 0.5 * wbase
    flat_hi = whi + 0.5 * wbase

    total = sum(iv.span for iv in intervals)
    best = (-math.inf, 0.0, math.inf)
    for iv in intervals:
        n = max(2, int(round(grid * iv.span / total)))
        us = np.linspace(iv.lo, iv.hi, n)
        f = np.full(n, cap)
        if iv.span < TWO_PI:
            f = np.minimum(f, 2.0 * (us - iv.lo))
            f = np.minimum(f, 2.0 * (iv.hi - us))
        chunk = max(1, int(4e6 // max(len(us), 1)))
        for s in range(0, len(flat_lo), chunk):
            flo = flat_lo[s:s + chunk, None]
            fhi = flat_hi[s:s + chunk, None]
            fb = wbase[s:s + chunk, None]
            vals = None
            for shift in (-TWO_PI, 0.0, TWO_PI):
                u = us[None, :] + shift
                dist = np.maximum(0.0, np.maximum(flo - u, u - fhi))
                v = fb + 2.0 * dist
                vals = v if vals is None else np.minimum(vals, v)
            f = np.minimum(f, vals.min(axis=0))
        i = int(np.argmax(f))
        mid = 0.5 * (iv.lo + iv.hi)
        cand = (float(f[i]), float(us[i]), abs(float(us[i]) - mid))
        if cand[0] > best[0] + 1e-15 or (abs(cand[0] - best[0]) <= 1e-15
                                         and cand[2] < best[2]):
            best = cand
    return _finish(circle, aspect, best[0], best[1], "grid", min_height)
