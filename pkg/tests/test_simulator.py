import pytest

from geese.planner import Leg, build_model, solve
from geese.simulator import (
    CollabConfig,
    collab_config,
    export_traces_csv,
    run_monte_carlo,
    simulate_collaborative,
    simulate_delivery,
)

from .conftest import use_case_request


def test_dry_run_completes_every_job():
    report = simulate_collaborative(collab_config("surface", n_jobs=60, seed=1))
    assert report.success_rate == 1.0
    assert all(t.outcome == "completed" for t in report.traces)
    assert report.response_times["mean"] == pytest.approx(300.0)


def test_encased_dry_equals_surface():
    a = simulate_collaborative(collab_config("surface", n_jobs=40, seed=5))
    b = simulate_collaborative(collab_config("encased_dry", n_jobs=40, seed=5))
    assert a.success_rate == b.success_rate == 1.0
    assert a.response_times == b.response_times


def test_zero_jobs_is_vacuously_successful():
    report = simulate_collaborative(collab_config("surface", n_jobs=0, seed=3))
    assert report.success_rate == 1.0
    assert report.traces == ()
    assert report.response_times == {"mean": 0.0, "p50": 0.0, "p95": 0.0}


def test_fixed_seed_reproduces_traces():
    config = collab_config("depth2", n_jobs=80, seed=99)
    a = simulate_collaborative(config)
    b = simulate_collaborative(config)
    assert a == b
    c = simulate_collaborative(collab_config("depth2", n_jobs=80, seed=100))
    assert c.traces != a.traces


def test_round_robin_is_fair():
    report = simulate_collaborative(
        collab_config("surface", n_workers=3, n_jobs=50, seed=2)
    )
    per_worker = [0, 0, 0]
    for t in report.traces:
        per_worker[t.assigned_worker] += 1
    assert max(per_worker) - min(per_worker) <= 1


def test_latency_scales_with_link_multipliers():
    dry = simulate_collaborative(collab_config("surface", n_jobs=50, seed=11))
    deep = simulate_collaborative(
        collab_config("depth2", role="master", n_jobs=50, seed=11)
    )
    completed = [t for t in deep.traces if t.outcome == "completed"]
    assert completed
    # per-job latency is the dry baseline scaled by the master's multiplier
    assert deep.response_times["mean"] == pytest.approx(
        3.0 * dry.response_times["mean"]
    )


def test_success_degrades_monotonically_with_depth():
    rates = []
    for regime in ("surface", "depth1", "depth2"):
        mc = run_monte_carlo(
            collab_config(regime, role="master", n_jobs=100, seed=4), 30
        )
        rates.append(mc.mean_success_rate)
    assert rates[0] >= rates[1] >= rates[2]
    assert rates[0] > rates[2]


def test_monte_carlo_interval_narrows_with_repetitions():
    config = collab_config("depth2", n_jobs=100, seed=7)
    small = run_monte_carlo(config, 100)
    large = run_monte_carlo(config, 400)
    ratio = large.half_width_95 / small.half_width_95
    # expected 0.5 scaling with 1/sqrt(reps); allow sampling noise
    assert 0.35 <= ratio <= 0.65


def test_monte_carlo_is_deterministic():
    config = collab_config("depth1", role="master", n_jobs=50, seed=13)
    assert run_monte_carlo(config, 20) == run_monte_carlo(config, 20)


def test_completion_never_precedes_dispatch():
    report = simulate_collaborative(collab_config("depth2", n_jobs=120, seed=21))
    for t in report.traces:
        if t.outcome == "completed":
            assert t.completed_at_ms >= t.dispatched_at_ms


def test_config_validation():
    with pytest.raises(ValueError):
        simulate_collaborative(collab_config("surface", n_workers=0))
    with pytest.raises(ValueError):
        CollabConfig(
            n_workers=2,
            master_link=collab_config("surface").master_link,
            worker_links=(),
        ).validate()
    with pytest.raises(ValueError):
        collab_config("abyss")


def test_trace_csv_round_trip():
    report = simulate_collaborative(collab_config("depth2", n_jobs=10, seed=1))
    text = export_traces_csv(report)
    lines = text.strip().split("\n")
    assert lines[0] == "job_id,assigned_worker,dispatched_at_ms,outcome,completed_at_ms"
    assert len(lines) == 11
    assert export_traces_csv(report) == text


def test_delivery_keeps_battery_above_floor(catalog, use_case):
    plan = solve(build_model(use_case, catalog))
    report = simulate_delivery(plan, use_case, catalog)
    assert report.success_rate == 1.0
    assert report.aborted_units == ()
    assert report.battery_timeline[0] == (0.0, 1.0)
    charges = [c for _, c in report.battery_timeline]
    assert min(charges) >= 0.5 - 1e-9
    assert charges == sorted(charges, reverse=True)


def test_delivery_zero_distance_drains_only_dwell(catalog):
    request = use_case_request(
        workload_users=100,
        legs=(Leg("A", ("aerial", "ground", "underwater"), 0.0, 0.0),),
    )
    plan = solve(build_model(request, catalog))
    assert plan.assignments
    report = simulate_delivery(plan, request, catalog)
    assert report.success_rate == 1.0
    assert report.battery_timeline == ((0.0, 1.0),)


def test_delivery_flags_overlong_mission(catalog, use_case):
    plan = solve(build_model(use_case, catalog))
    # stretch the tour beyond the plan's validated envelope
    longer = use_case_request(
        legs=tuple(
            Leg(l.location_id, l.allowed_modalities, 10**6, l.distance_from_prev_m)
            for l in use_case.legs
        )
    )
    report = simulate_delivery(plan, longer, catalog)
    assert report.success_rate < 1.0
    assert report.aborted_units


def test_delivery_requires_optimal_plan(catalog, use_case):
    import dataclasses

    plan = solve(build_model(use_case, catalog))
    stale = dataclasses.replace(plan, certificate="stale")
    with pytest.raises(ValueError):
        simulate_delivery(stale, use_case, catalog)


def test_delivery_rejects_unknown_catalog_ids(catalog, use_case):
    import dataclasses

    plan = solve(build_model(use_case, catalog))
    bad = dataclasses.replace(
        plan,
        assignments=tuple(
            dataclasses.replace(a, uav_id="ghost") for a in plan.assignments
        ),
    )
    with pytest.raises(KeyError):
        simulate_delivery(bad, use_case, catalog)


def test_aerial_unit_survives_one_interval_mission(catalog):
    # a 109 s per-interval aerial unit at full payload has a 545 s budget;
    # a 500 s mission should end just above the 50% floor
    request = use_case_request(
        workload_users=0,
        legs=(Leg("A", ("aerial",), 500.0, 0.0),),
    )
    uav = catalog.uav("powereye")
    cloudlet = catalog.cloudlet("cat4_type1")
    from geese.planner import Assignment, Plan

    plan = Plan(
        certificate="optimal",
        assignments=(
            Assignment(uav.id, cloudlet.id, 1, ("A",), 500.0, 545.0),
        ),
        total_cost=0.0,
        capacity_total=0,
        mean_response_ms=0.0,
        slack={},
    )
    report = simulate_delivery(plan, request, catalog)
    assert report.success_rate == 1.0
    final_charge = report.battery_timeline[-1][1]
    assert final_charge == pytest.approx(1.0 - 0.1 * 500.0 / 109.0)
    assert final_charge > 0.5
