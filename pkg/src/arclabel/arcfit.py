"""Least-squares support-circle fitting for candidate paths.

The objective is the geometric one, sum_i (|p_i - c| - r)^2: an algebraic
(Kasa) fit provides the initial guess, a damped Gauss-Newton iteration
refines it.  Paths that are too straight to admit a finite fit are capped at
a large radius and flagged so that downstream code knows the support line is
effectively straight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput
from .geometry import Circle, Point

R_CAP_FACTOR = 1000.0
MAX_ITER = 50
REL_TOL = 1e-10


@dataclass(frozen=True)
class CircleFit:
    circle: Circle
    residual: float
    capped: bool


def _objective(pts: np.ndarray, cx: float, cy: float, r: float) -> float:
    d = np.hypot(pts[:, 0] - cx, pts[:, 1] - cy)
    return float(np.sum((d - r) ** 2))


def _kasa(pts: np.ndarray):
    """Linear least squares on x^2 + y^2 = 2 cx x + 2 cy y + c; None if singular."""
    a = np.column_stack([2.0 * pts[:, 0], 2.0 * pts[:, 1], np.ones(len(pts))])
    rhs = np.einsum("ij,ij->i", pts, pts)
    sol, _, rank, _ = np.linalg.lstsq(a, rhs, rcond=None)
    if rank < 3:
        return None
    cx, cy, c = sol
    r2 = c + cx * cx + cy * cy
    if not np.isfinite(r2) or r2 <= 0.0:
        return None
    return float(cx), float(cy), float(math.sqrt(r2))


def _refine(pts: np.ndarray, cx: float, cy: float, r: float):
    """Damped Gauss-Newton on (cx, cy, r); never worsens the objective."""
    params = np.array([cx, cy, r])
    best = _objective(pts, *params)
    lam = 1e-8
    for _ in range(MAX_ITER):
        dx = pts[:, 0] - params[0]
        dy = pts[:, 1] - params[1]
        d = np.hypot(dx, dy)
        d = np.maximum(d, 1e-300)
        res = d - params[2]
        jac = np.column_stack([-dx / d, -dy / d, -np.ones(len(pts))])
        jtj = jac.T @ jac
        jtr = jac.T @ res
        step = None
        for _ in range(20):
            try:
                step = np.linalg.solve(jtj + lam * np.diag(np.diag(jtj)) + 1e-300 * np.eye(3), -jtr)
            except np.linalg.LinAlgError:
                lam = max(lam * 10.0, 1e-12)
                continue
            trial = params + step
            val = _objective(pts, *trial)
            if np.isfinite(val) and val <= best:
                break
            lam = max(lam * 10.0, 1e-12)
            step = None
        if step is None:
            break
        moved = float(np.max(np.abs(step) / (np.abs(params) + 1.0)))
        params = params + step
        best = _objective(pts, *params)
        lam = max(lam * 0.25, 1e-12)
        if moved < REL_TOL:
            break
    return float(params[0]), float(params[1]), float(params[2]), best


def _capped(pts: np.ndarray, r_cap: float) -> CircleFit:
    """Near-line fallback: center on the normal through the centroid at r_cap."""
    centroid = pts.mean(axis=0)
    centered = pts - centroid
    # principal direction of the point cloud
    cov = centered.T @ centered
    _, vecs = np.linalg.eigh(cov)
    direction = vecs[:, -1]
    normal = np.array([-direction[1], direction[0]])
    if normal[1] < 0 or (normal[1] == 0 and normal[0] < 0):
        normal = -normal  # fix a deterministic sign before comparing sides
    cands = [centroid + r_cap * normal, centroid - r_cap * normal]
    objs = [_objective(pts, cx, cy, r_cap) for cx, cy in cands]
    pick = 0 if objs[0] <= objs[1] else 1
    cx, cy = cands[pick]
    return CircleFit(Circle(Point(float(cx), float(cy)), float(r_cap)),
                     residual=float(objs[pick]), capped=True)


def fit_circle(points) -> CircleFit:
    """Fit the geometric least-squares circle through >= 3 distinct points.

    Kasa initialization refined by damped Gauss-Newton; if the refined radius
    exceeds 1000x the path bounding-box diagonal the capped straight-line
    circle is returned instead (flagged ``capped``).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DegenerateInput(f"expected (n, 2) points, got shape {pts.shape}")
    distinct = np.unique(pts, axis=0)
    if len(distinct) < 3:
        raise DegenerateInput(f"need >= 3 distinct points, got {len(distinct)}")

    span = pts.max(axis=0) - pts.min(axis=0)
    r_cap = R_CAP_FACTOR * float(np.hypot(*span))

    # center the data for conditioning
    shift = pts.mean(axis=0)
    local = pts - shift
    init = _kasa(local)
    if init is None:
        return _capped(pts, r_cap)
    cx, cy, r, residual = _refine(local, *init)
    if not np.isfinite(r) or r > r_cap:
        return _capped(pts, r_cap)
    return CircleFit(Circle(Point(cx + shift[0], cy + shift[1]), r),
                     residual=residual, capped=False)
