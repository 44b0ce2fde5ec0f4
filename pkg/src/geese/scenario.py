"""Scenario file ingestion shared by the CLI and the HTTP service."""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

from .catalog import Calibration, Catalog, CatalogParseError, default_catalog, load_catalog
from .planner import DeploymentRequest, Leg, PlannerError

SUPPORTED_SCHEMA_VERSIONS = (1,)


class ScenarioError(Exception):
    pass


def request_from_document(doc: dict) -> DeploymentRequest:
    if not isinstance(doc, dict):
        raise ScenarioError("request must be an object")
    try:
        legs = tuple(
            Leg(
                location_id=str(leg["location_id"]),
                allowed_modalities=tuple(
                    leg.get("allowed_modalities", ["aerial", "ground", "underwater"])
                ),
                dwell_s=float(leg.get("dwell_s", 0.0)),
                distance_from_prev_m=float(leg.get("distance_from_prev_m", 0.0)),
            )
            for leg in doc["legs"]
        )
        request = DeploymentRequest(
            workload_users=int(doc["workload_users"]),
            response_bound_ms=float(doc["response_bound_ms"]),
            legs=legs,
            response_metric=str(doc.get("response_metric", "image")),
            response_mode=str(doc.get("response_mode", "per_unit")),
            cost_overrides=doc.get("cost_overrides"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed request: {exc}") from exc
    try:
        request.validate()
    except PlannerError as exc:
        raise ScenarioError(str(exc)) from exc
    return request


def request_to_document(request: DeploymentRequest) -> dict:
    return {
        "workload_users": request.workload_users,
        "response_bound_ms": request.response_bound_ms,
        "response_metric": request.response_metric,
        "response_mode": request.response_mode,
        "legs": [
            {
                "location_id": leg.location_id,
                "allowed_modalities": list(leg.allowed_modalities),
                "dwell_s": leg.dwell_s,
                "distance_from_prev_m": leg.distance_from_prev_m,
            }
            for leg in request.legs
        ],
        "cost_overrides": request.cost_overrides,
    }


def _merge_calibration(catalog: Catalog, overrides: dict) -> Catalog:
    cal = catalog.calibration
    merged = Calibration(
        load_curves={**cal.load_curves, **overrides.get("load_curves", {})},
        idle_cap_hours=float(overrides.get("idle_cap_hours", cal.idle_cap_hours)),
        link_models={**cal.link_models, **overrides.get("link_models", {})},
    )
    return replace(catalog, calibration=merged)


def load_scenario(path, catalog_override=None):
    """Parse a scenario file into (request, catalog, seed, raw document)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    version = doc.get("schema_version")
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise ScenarioError(f"unsupported scenario schema_version {version!r}")

    if catalog_override is not None:
        catalog = catalog_override
    elif "catalog" in doc:
        try:
            catalog = load_catalog(doc["catalog"])
        except CatalogParseError as exc:
            raise ScenarioError(f"inline catalog: {exc}") from exc
    elif "catalog_path" in doc:
        base = Path(path).parent
        catalog = load_catalog(str((base / doc["catalog_path"]).resolve()))
    else:
        catalog = default_catalog()

    if "calibration" in doc:
        catalog = _merge_calibration(catalog, doc["calibration"])

    request = request_from_document(doc.get("request"))
    seed = int(doc.get("seed", 0))
    return request, catalog, seed, doc
