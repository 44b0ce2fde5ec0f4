import json

import pytest

from geese.catalog import default_catalog
from geese.planner import DeploymentRequest, Leg


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


def use_case_request(**overrides) -> DeploymentRequest:
    """The two-location crowd scenario: 1500 users, 2 s response bound."""
    kwargs = dict(
        workload_users=1500,
        response_bound_ms=2000.0,
        legs=(
            Leg("A", ("aerial", "ground", "underwater"), 60.0, 200.0),
            Leg("B", ("aerial", "ground"), 60.0, 200.0),
        ),
    )
    kwargs.update(overrides)
    return DeploymentRequest(**kwargs)


@pytest.fixture
def use_case():
    return use_case_request()


@pytest.fixture
def use_case_scenario(tmp_path):
    doc = {
        "schema_version": 1,
        "seed": 42,
        "request": {
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
        },
    }
    path = tmp_path / "use_case.json"
    path.write_text(json.dumps(doc))
    return path
