"""Plan and simulate UAV-delivered edge cloudlet deployments."""

__version__ = "0.1.0"

from .catalog import (
    Catalog,
    CloudletSpec,
    DeviceSpec,
    UavSpec,
    cloudlet_capacity,
    default_catalog,
    effective_payload,
    load_catalog,
)
from .perf_models import (
    AppProfile,
    LinkModel,
    LoadCurve,
    battery_duration,
    classify_app,
    generate_prime_task,
    link_model,
    operational_time,
    response_time_at_load,
)
from .planner import (
    DeploymentRequest,
    Infeasibility,
    Leg,
    Plan,
    build_model,
    canonical_json,
    oracle_enumerate,
    plan_multi_leg,
    solve,
)
from .simulator import (
    CollabConfig,
    SimReport,
    collab_config,
    run_monte_carlo,
    simulate_collaborative,
    simulate_delivery,
)
