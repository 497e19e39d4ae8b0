"""FastAPI service wrapping the labeling core.

The CLI uses the same handler functions in-process; the HTTP layer is a thin
serialization shell around them.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException, Response

from ..errors import ParseError, ValidationError
from ..bench import run_benchmark
from ..geojson_io import Dataset, read_geojson, results_to_dict, write_svg
from ..labeler import LabelConfig, LabelResult, label_dataset
from .schemas import (
    AreaResultOut,
    BenchResponse,
    BenchRowOut,
    LabelRequest,
    LabelResponse,
    PhaseStatsOut,
)


def config_from_options(opts) -> LabelConfig:
    return LabelConfig(aspect=opts.aspect, k=opts.k, max_extent=opts.max_extent,
                       min_height=opts.min_height, densify=opts.densify,
                       parallel=opts.parallel)


def dataset_from_request(req: LabelRequest) -> Dataset:
    return read_geojson(json.dumps(req.geojson), name_key=req.options.name_key)


def run_label_request(req: LabelRequest) -> tuple[Dataset, list[LabelResult]]:
    dataset = dataset_from_request(req)
    results = label_dataset(dataset, config_from_options(req.options))
    return dataset, results


def label_response(results: list[LabelResult]) -> LabelResponse:
    payload = results_to_dict(results)
    return LabelResponse(areas=[AreaResultOut(**a) for a in payload["areas"]])


def create_app() -> FastAPI:
    app = FastAPI(title="arclabel", version="0.1.0",
                  description="Curved area-label placement service")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/label", response_model=LabelResponse)
    def label(req: LabelRequest) -> LabelResponse:
        try:
            _, results = run_label_request(req)
        except (ParseError, ValidationError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return label_response(results)

    @app.post("/svg")
    def svg(req: LabelRequest) -> Response:
        try:
            dataset, results = run_label_request(req)
        except (ParseError, ValidationError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return Response(content=write_svg(dataset, results),
                        media_type="image/svg+xml")

    @app.post("/bench", response_model=BenchResponse)
    def bench(req: LabelRequest) -> BenchResponse:
        try:
            dataset = dataset_from_request(req)
            report = run_benchmark(dataset, config_from_options(req.options))
        except (ParseError, ValidationError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return BenchResponse(
            rows=[BenchRowOut(**r.__dict__) for r in report.rows],
            stats={k: PhaseStatsOut(**v.__dict__) for k, v in report.stats.items()},
            total_seconds=report.total_seconds,
            labeled=report.labeled_count,
            csv=report.to_csv().decode("utf-8"),
        )

    return app


app = create_app()
