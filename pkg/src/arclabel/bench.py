"""Benchmark harness: per-area, per-phase wall-clock timing and the
work-per-node aggregate table (mean / std / spread of microseconds per node)."""

from __future__ import annotations

import io
import csv
from dataclasses import dataclass

import numpy as np

from .geojson_io import Dataset
from .labeler import LabelConfig, LabelResult, label_area, label_dataset

PHASES = ("medial_axis", "paths", "placement")
_MIN_T = 1e-9  # timer resolution clamp keeps per-node spreads finite


@dataclass(frozen=True)
class BenchRow:
    area_id: str
    nodes: int
    t_medial_axis: float
    t_paths: float
    t_placement: float

    def phase(self, name: str) -> float:
        return getattr(self, f"t_{name}")


@dataclass(frozen=True)
class PhaseStats:
    mean_us_per_node: float   # sum(t) / sum(nodes), the per-node average
    std_us_per_node: float    # std over per-area per-node values
    spread: float             # max/min over per-area per-node values


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    stats: dict[str, PhaseStats]
    total_seconds: float
    results: tuple[LabelResult, ...]

    @property
    def labeled_count(self) -> int:
        return sum(1 for r in self.results if r.fitted)

    def to_csv(self) -> bytes:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["area_id", "nodes", "t_medial_axis", "t_paths", "t_placement"])
        for r in self.rows:
            w.writerow([r.area_id, r.nodes, repr(r.t_medial_axis),
                        repr(r.t_paths), repr(r.t_placement)])
        return buf.getvalue().encode("utf-8")

    def summary_table(self) -> str:
        lines = [f"{'':>14} {'medial axis':>12} {'path-enum':>12} {'placement':>12}"]
        for label, attr in (("mean (us)", "mean_us_per_node"),
                            ("std (us)", "std_us_per_node"),
                            ("spread", "spread")):
            vals = [getattr(self.stats[p], attr) for p in PHASES]
            lines.append(f"{label:>14} " + " ".join(f"{v:12.2f}" for v in vals))
        lines.append(f"total: {self.total_seconds:.3f} s over "
                     f"{sum(r.nodes for r in self.rows)} nodes, "
                     f"{self.labeled_count}/{len(self.rows)} areas labeled")
        return "\n".join(lines)


def _aggregate(rows: list[BenchRow]) -> dict[str, PhaseStats]:
    stats = {}
    nodes = np.array([r.nodes for r in rows], dtype=float)
    for phase in PHASES:
        t = np.maximum(np.array([r.phase(phase) for r in rows]), _MIN_T)
        per_node_us = t / nodes * 1e6
        mean = float(t.sum() / nodes.sum() * 1e6)
        std = float(per_node_us.std())
        spread = float(per_node_us.max() / per_node_us.min())
        stats[phase] = PhaseStats(mean, std, spread)
    return stats


def run_benchmark(dataset: Dataset, config: LabelConfig | None = None) -> BenchReport:
    """Label every area single-threaded, timing each phase."""
    if not dataset.areas:
        raise ValueError("dataset is empty")
    cfg = config or LabelConfig()
    if cfg.parallel:
        cfg = LabelConfig(**{**cfg.__dict__, "parallel": False})
    results = label_dataset(dataset, cfg)
    rows = [BenchRow(r.area_id, r.node_count, r.timings.medial_axis,
                     r.timings.paths, r.timings.placement) for r in results]
    total = sum(row.t_medial_axis + row.t_paths + row.t_placement for row in rows)
    return BenchReport(tuple(rows), _aggregate(rows), total, tuple(results))
