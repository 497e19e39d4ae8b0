"""Pydantic request/response models for the labeling service."""

from __future__ import annotations

import math

from pydantic import BaseModel, Field


class LabelOptions(BaseModel):
    aspect: float = Field(default=0.18, gt=0)
    k: int = Field(default=8, ge=1)
    max_extent: float = Field(default=math.pi / 3.0, gt=0)
    min_height: float = Field(default=0.0, ge=0)
    densify: float | None = Field(default=None, gt=0,
                                  description="max boundary edge length; None = bbox diagonal / 200")
    name_key: str = "name"
    parallel: bool = False


class LabelRequest(BaseModel):
    geojson: dict
    options: LabelOptions = LabelOptions()


class CircleOut(BaseModel):
    cx: float
    cy: float
    r: float


class AreaResultOut(BaseModel):
    id: str
    name: str
    status: str
    circle: CircleOut | None = None
    center_angle: float | None = None
    extent: float | None = None
    L: float | None = None
    H: float | None = None
    binding: str | None = None


class LabelResponse(BaseModel):
    areas: list[AreaResultOut]


class BenchRowOut(BaseModel):
    area_id: str
    nodes: int
    t_medial_axis: float
    t_paths: float
    t_placement: float


class PhaseStatsOut(BaseModel):
    mean_us_per_node: float
    std_us_per_node: float
    spread: float


class BenchResponse(BaseModel):
    rows: list[BenchRowOut]
    stats: dict[str, PhaseStatsOut]
    total_seconds: float
    labeled: int
    csv: str
