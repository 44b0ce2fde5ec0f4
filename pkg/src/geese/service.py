"""HTTP service for the operator console.

The catalog is immutable for the process lifetime; every planning or
simulation request is appended to the run log.  Plan documents are byte
identical to the CLI's for the same inputs.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException, Query, Response

from . import __version__
from .catalog import Catalog
from .perf_models import DomainError, operational_time
from .planner import (
    build_model,
    canonical_json,
    plan_from_document,
    solve,
)
from .runlog import RunLog
from .scenario import ScenarioError, request_from_document, request_to_document
from .simulator import collab_config, simulate_collaborative, simulate_delivery


def _canonical_response(document: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(document),
        media_type="application/json",
        status_code=status_code,
    )


def create_app(catalog: Catalog, state_dir) -> FastAPI:
    app = FastAPI(title="geese", version=__version__)
    runlog = RunLog(state_dir)

    @app.get("/catalog")
    def get_catalog():
        return _canonical_response(catalog.to_document())

    @app.get("/models/endurance")
    def get_endurance(uav: str = Query(...), payload: float = Query(...)):
        try:
            uav_spec = catalog.uav(uav)
        except KeyError:
            raise HTTPException(404, f"unknown uav '{uav}'")
        try:
            seconds = operational_time(uav_spec, payload)
        except DomainError as exc:
            raise HTTPException(422, str(exc))
        return _canonical_response(
            {"uav": uav, "payload_gm": payload, "operational_time_s": seconds}
        )

    @app.post("/plan")
    def post_plan(body: dict):
        try:
            request = request_from_document(body)
        except ScenarioError as exc:
            raise HTTPException(422, str(exc))
        result = solve(build_model(request, catalog))
        doc = result.to_document()
        record = runlog.append(
            "plan", request_to_document(request), doc, __version__
        )
        doc["run_id"] = record["run_id"]
        return _canonical_response(doc)

    @app.post("/simulate/collab")
    def post_simulate_collab(body: dict):
        try:
            config = collab_config(
                regime=body.get("regime", "surface"),
                role=body.get("role", "workers"),
                n_workers=int(body.get("n_workers", 3)),
                n_jobs=int(body.get("n_jobs", 50)),
                per_job_work_ms=float(body.get("per_job_work_ms", 300.0)),
                seed=int(body.get("seed", 0)),
                calibration=catalog.calibration,
            )
            report = simulate_collaborative(config)
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        doc = report.to_document()
        record = runlog.append("simulate/collab", body, doc, __version__)
        doc["run_id"] = record["run_id"]
        return _canonical_response(doc)

    @app.post("/simulate/delivery")
    def post_simulate_delivery(body: dict):
        plan_doc = body.get("plan")
        if plan_doc is None and "plan_id" in body:
            record = runlog.get(int(body["plan_id"]))
            if record is None or record["kind"] != "plan":
                raise HTTPException(404, f"no plan run {body.get('plan_id')}")
            plan_doc = record["result"]
        if plan_doc is None:
            raise HTTPException(422, "body requires 'plan' or 'plan_id'")
        if plan_doc.get("certificate") != "optimal":
            raise HTTPException(422, "plan certificate must be 'optimal'")
        try:
            request = request_from_document(body.get("request"))
            plan = plan_from_document(plan_doc)
            report = simulate_delivery(plan, request, catalog)
        except ScenarioError as exc:
            raise HTTPException(422, str(exc))
        except KeyError as exc:
            raise HTTPException(422, f"plan references unknown catalog id {exc}")
        doc = report.to_document()
        record = runlog.append("simulate/delivery", body, doc, __version__)
        doc["run_id"] = record["run_id"]
        return _canonical_response(doc)

    @app.get("/runs")
    def get_runs():
        return _canonical_response({"runs": runlog.list_runs()})

    @app.get("/runs/{run_id}")
    def get_run(run_id: int):
        record = runlog.get(run_id)
        if record is None:
            raise HTTPException(404, f"no run {run_id}")
        return _canonical_response(record)

    return app
