import json

import pytest
from fastapi.testclient import TestClient

from geese.cli import main
from geese.runlog import input_digest
from geese.service import create_app


@pytest.fixture
def client(catalog, tmp_path):
    app = create_app(catalog=catalog, state_dir=tmp_path / "state")
    with TestClient(app) as c:
        yield c


REQUEST_DOC = {
    "workload_users": 1500,
    "response_bound_ms": 2000,
    "legs": [
        {
            "location_id": "A",
            "allowed_modalities": ["aerial", "ground", "underwater"],
            "dwell_s": 60,
            "distance_from_prev_m": 200,
        },
        {
            "location_id": "B",
            "allowed_modalities": ["aerial", "ground"],
            "dwell_s": 60,
            "distance_from_prev_m": 200,
        },
    ],
}


def test_get_catalog(client, catalog):
    resp = client.get("/catalog")
    assert resp.status_code == 200
    assert resp.json() == catalog.to_document()


def test_endurance_endpoint(client):
    resp = client.get("/models/endurance", params={"uav": "powereye", "payload": 100})
    assert resp.status_code == 200
    assert resp.json()["operational_time_s"] == 146.0


def test_endurance_unknown_uav_is_404(client):
    assert client.get(
        "/models/endurance", params={"uav": "ghost", "payload": 100}
    ).status_code == 404


def test_endurance_out_of_domain_is_422(client):
    assert client.get(
        "/models/endurance", params={"uav": "powereye", "payload": 5000}
    ).status_code == 422


def test_plan_endpoint_returns_optimal_plan(client):
    resp = client.post("/plan", json=REQUEST_DOC)
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["certificate"] == "optimal"
    assert doc["capacity_total"] >= 1500
    assert doc["run_id"] == 1


def test_plan_endpoint_rejects_malformed_request(client):
    assert client.post("/plan", json={"workload_users": 10}).status_code == 422


def test_plan_matches_cli_bytes(client, capsys, use_case_scenario):
    resp = client.post("/plan", json=REQUEST_DOC)
    service_doc = resp.json()
    service_doc.pop("run_id")
    assert main(["plan", str(use_case_scenario)]) == 0
    cli_doc = json.loads(capsys.readouterr().out)
    assert service_doc == cli_doc


def test_simulate_collab_endpoint(client):
    body = {"regime": "depth2", "role": "master", "n_jobs": 100, "seed": 5}
    a = client.post("/simulate/collab", json=body)
    assert a.status_code == 200
    doc = a.json()
    assert 0.0 <= doc["success_rate"] <= 1.0
    b = client.post("/simulate/collab", json=body)
    b_doc = b.json()
    assert b_doc["run_id"] == doc["run_id"] + 1
    doc.pop("run_id")
    b_doc.pop("run_id")
    assert doc == b_doc


def test_simulate_collab_rejects_bad_regime(client):
    assert client.post(
        "/simulate/collab", json={"regime": "abyss"}
    ).status_code == 422


def test_simulate_delivery_with_inline_plan(client):
    plan_doc = client.post("/plan", json=REQUEST_DOC).json()
    plan_doc.pop("run_id")
    resp = client.post(
        "/simulate/delivery", json={"plan": plan_doc, "request": REQUEST_DOC}
    )
    assert resp.status_code == 200
    assert resp.json()["success_rate"] == 1.0


def test_simulate_delivery_by_plan_id(client):
    run_id = client.post("/plan", json=REQUEST_DOC).json()["run_id"]
    resp = client.post(
        "/simulate/delivery", json={"plan_id": run_id, "request": REQUEST_DOC}
    )
    assert resp.status_code == 200
    assert resp.json()["success_rate"] == 1.0


def test_simulate_delivery_unknown_plan_id_is_404(client):
    assert client.post(
        "/simulate/delivery", json={"plan_id": 99, "request": REQUEST_DOC}
    ).status_code == 404


def test_simulate_delivery_requires_plan(client):
    assert client.post(
        "/simulate/delivery", json={"request": REQUEST_DOC}
    ).status_code == 422


def test_run_log_round_trip(client):
    client.post("/plan", json=REQUEST_DOC)
    client.post("/simulate/collab", json={"regime": "depth1", "seed": 2})
    runs = client.get("/runs").json()["runs"]
    assert [r["run_id"] for r in runs] == [1, 2]
    assert runs[0]["kind"] == "plan"
    assert runs[1]["kind"] == "simulate/collab"
    one = client.get("/runs/1")
    assert one.status_code == 200
    assert one.json() == runs[0]
    assert client.get("/runs/3").status_code == 404


def test_run_records_carry_reproducible_digest(client):
    client.post("/plan", json=REQUEST_DOC)
    client.post("/plan", json=REQUEST_DOC)
    runs = client.get("/runs").json()["runs"]
    assert runs[0]["input_digest"] == runs[1]["input_digest"]
    assert runs[0]["input_digest"] == input_digest(runs[0]["inputs"])
    assert runs[0]["result"] == runs[1]["result"]


def test_run_log_survives_service_restart(catalog, tmp_path):
    state = tmp_path / "state"
    with TestClient(create_app(catalog=catalog, state_dir=state)) as c:
        c.post("/plan", json=REQUEST_DOC)
    with TestClient(create_app(catalog=catalog, state_dir=state)) as c:
        runs = c.get("/runs").json()["runs"]
        assert len(runs) == 1
        new_id = c.post("/plan", json=REQUEST_DOC).json()["run_id"]
        assert new_id == 2
