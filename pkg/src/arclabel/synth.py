"""Seeded synthetic datasets of country-like blobs.

Shapes are star-shaped radial perturbations of circles (always simple), with
vertex counts spread over several orders of magnitude to mimic a national
outline set; a fraction of the larger areas gets a lake hole.
"""

from __future__ import annotations

import numpy as np

from .geometry import AreaShape
from .geojson_io import Dataset, DatasetArea


def blob_ring(rng: np.random.Generator, n: int, radius: float = 1.0,
              center=(0.0, 0.0), roughness: float = 0.25,
              harmonics: int = 6) -> np.ndarray:
    """Star-shaped ring of ``n`` vertices around ``center``."""
    n = max(int(n), 8)
    theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    r = np.ones(n)
    for j in range(2, 2 + harmonics):
        amp = roughness * rng.uniform(0.2, 1.0) / j
        r += amp * np.cos(j * theta + rng.uniform(0, 2 * np.pi))
    r = np.clip(r, 0.35, None) * radius
    return np.stack([center[0] + r * np.cos(theta),
                     center[1] + r * np.sin(theta)], axis=1)


def blob_area(rng: np.random.Generator, n: int, radius: float = 1.0,
              center=(0.0, 0.0), with_hole: bool = False,
              roughness: float = 0.25) -> AreaShape:
    outer = blob_ring(rng, n, radius, center, roughness)
    holes = []
    if with_hole and n >= 24:
        hn = max(8, n // 6)
        hr = radius * rng.uniform(0.12, 0.22)
        off = radius * 0.3
        hc = (center[0] + rng.uniform(-off, off), center[1] + rng.uniform(-off, off))
        holes.append(blob_ring(rng, hn, hr, hc, roughness=0.15))
    return AreaShape(outer, holes)


def make_country_dataset(num_areas: int = 124, total_vertices: int = 200_000,
                         seed: int = 20_23, hole_fraction: float = 0.15) -> Dataset:
    """Dataset of blob "countries" with a wide vertex-count spread.

    Vertex counts are drawn log-uniformly and rescaled so they sum to about
    ``total_vertices``; areas are laid out on a grid so shapes never overlap
    (irrelevant for labeling, convenient for rendering).
    """
    rng = np.random.default_rng(seed)
    raw = np.exp(rng.uniform(np.log(10.0), np.log(30_000.0), size=num_areas))
    sizes = np.maximum(8, np.round(raw * (total_vertices / raw.sum())).astype(int))

    cols = int(np.ceil(np.sqrt(num_areas)))
    spacing = 300.0
    areas = []
    for i, n in enumerate(sizes):
        cx = (i % cols) * spacing
        cy = (i // cols) * spacing
        radius = spacing * rng.uniform(0.25, 0.45)
        with_hole = rng.uniform() < hole_fraction and n >= 200
        shape = blob_area(rng, int(n), radius, (cx, cy), with_hole)
        areas.append(DatasetArea(id=f"a{i}", name=f"Area {i}", shape=shape))
    return Dataset(tuple(areas), source={"synthetic": True, "seed": seed})
