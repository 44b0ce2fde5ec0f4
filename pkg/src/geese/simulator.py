"""Seeded simulations: master/worker collaborative processing over lossy
links, and delivery missions executing a plan with battery accounting.

Each run is single-threaded and deterministic for a fixed seed; time is
kept in integer microseconds to avoid float drift in event ordering.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .catalog import Catalog
from .perf_models import (
    USABLE_BATTERY_INTERVALS,
    LinkModel,
    link_model,
    operational_time,
)
from .planner import DeploymentRequest, Plan

#: Task size from the collaborative benchmark (50 images at 224x224).
DEFAULT_N_JOBS = 50
DEFAULT_PER_JOB_WORK_MS = 300.0

#: Remaining-energy fraction below which a mission must not continue.
BATTERY_FLOOR = 0.5

_US_PER_MS = 1000


@dataclass(frozen=True)
class CollabConfig:
    n_workers: int
    master_link: LinkModel
    worker_links: tuple  # LinkModel per worker
    n_jobs: int = DEFAULT_N_JOBS
    per_job_work_ms: float = DEFAULT_PER_JOB_WORK_MS
    seed: int = 0

    def validate(self):
        if self.n_workers < 1:
            raise ValueError("n_workers must be >= 1")
        if self.n_jobs < 0:
            raise ValueError("n_jobs must be >= 0")
        if len(self.worker_links) != self.n_workers:
            raise ValueError("one worker link required per worker")


def collab_config(
    regime: str = "surface",
    role: str = "workers",
    n_workers: int = 3,
    n_jobs: int = DEFAULT_N_JOBS,
    per_job_work_ms: float = DEFAULT_PER_JOB_WORK_MS,
    seed: int = 0,
    calibration=None,
) -> CollabConfig:
    """Convenience builder: submerge either the master or all workers."""
    if role == "master":
        master = link_model(regime, "master", calibration)
        workers = tuple(
            link_model("surface", "workers", calibration) for _ in range(n_workers)
        )
    else:
        master = link_model("surface", "master", calibration)
        workers = tuple(
            link_model(regime, "workers", calibration) for _ in range(n_workers)
        )
    return CollabConfig(
        n_workers=n_workers,
        master_link=master,
        worker_links=workers,
        n_jobs=n_jobs,
        per_job_work_ms=per_job_work_ms,
        seed=seed,
    )


@dataclass(frozen=True)
class JobTrace:
    job_id: int
    assigned_worker: int
    dispatched_at_ms: float
    outcome: str  # completed | lost
    completed_at_ms: Optional[float] = None


@dataclass(frozen=True)
class SimReport:
    success_rate: float
    response_times: dict  # mean, p50, p95 (ms); zeros when nothing completed
    battery_timeline: tuple  # of (t_s, remaining fraction)
    traces: tuple
    aborted_units: tuple = ()

    def to_document(self) -> dict:
        return {
            "success_rate": self.success_rate,
            "response_times": self.response_times,
            "battery_timeline": [list(p) for p in self.battery_timeline],
            "traces": [
                {
                    "job_id": t.job_id,
                    "assigned_worker": t.assigned_worker,
                    "dispatched_at_ms": t.dispatched_at_ms,
                    "outcome": t.outcome,
                    "completed_at_ms": t.completed_at_ms,
                }
                for t in self.traces
            ],
            "aborted_units": list(self.aborted_units),
        }


def _percentile(sorted_values, q: float) -> float:
    if not sorted_values:
        return 0.0
    pos = q * (len(sorted_values) - 1)
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    frac = pos - lo
    return sorted_values[lo] * (1 - frac) + sorted_values[hi] * frac


def _summary(values_ms) -> dict:
    if not values_ms:
        return {"mean": 0.0, "p50": 0.0, "p95": 0.0}
    ordered = sorted(values_ms)
    return {
        "mean": sum(ordered) / len(ordered),
        "p50": _percentile(ordered, 0.50),
        "p95": _percentile(ordered, 0.95),
    }


def simulate_collaborative(config: CollabConfig) -> SimReport:
    """Round-robin master/worker run over the configured links.

    Jobs are dispatched cyclically to workers; each job succeeds with the
    product of the master and worker per-job success probabilities (no
    retries).  Completed-job latency is the base work time scaled by both
    latency multipliers, queued sequentially per worker.
    """
    config.validate()
    rng = random.Random(config.seed)
    work_us = round(config.per_job_work_ms * _US_PER_MS)
    worker_free_us = [0] * config.n_workers
    traces = []
    completed_ms = []
    for job_id in range(config.n_jobs):
        worker = job_id % config.n_workers
        link = config.worker_links[worker]
        p = config.master_link.per_job_success_p * link.per_job_success_p
        draw = rng.random()
        # the master holds each job until the worker's previous result is back
        dispatched_us = worker_free_us[worker]
        if draw < p:
            latency_us = round(
                work_us
                * config.master_link.latency_multiplier
                * link.latency_multiplier
            )
            done_us = dispatched_us + latency_us
            worker_free_us[worker] = done_us
            traces.append(
                JobTrace(
                    job_id,
                    worker,
                    dispatched_us / _US_PER_MS,
                    "completed",
                    done_us / _US_PER_MS,
                )
            )
            completed_ms.append(latency_us / _US_PER_MS)
        else:
            traces.append(JobTrace(job_id, worker, dispatched_us / _US_PER_MS, "lost"))
    n_done = len(completed_ms)
    success = n_done / config.n_jobs if config.n_jobs else 1.0
    return SimReport(
        success_rate=success,
        response_times=_summary(completed_ms),
        battery_timeline=(),
        traces=tuple(traces),
    )


@dataclass(frozen=True)
class MonteCarloReport:
    repetitions: int
    mean_success_rate: float
    half_width_95: float
    mean_response_ms: float
    reports: tuple = ()

    def to_document(self) -> dict:
        return {
            "repetitions": self.repetitions,
            "mean_success_rate": self.mean_success_rate,
            "half_width_95": self.half_width_95,
            "mean_response_ms": self.mean_response_ms,
        }


def run_monte_carlo(
    config: CollabConfig, repetitions: int, keep_reports: bool = False
) -> MonteCarloReport:
    """Independent seeded repetitions of the collaborative simulation.

    Reports mean success rate with a 95% normal-approximation interval
    half-width.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    seeder = random.Random(config.seed)
    rates = []
    means = []
    reports = []
    for _ in range(repetitions):
        rep_seed = seeder.getrandbits(63)
        rep_config = CollabConfig(
            n_workers=config.n_workers,
            master_link=config.master_link,
            worker_links=config.worker_links,
            n_jobs=config.n_jobs,
            per_job_work_ms=config.per_job_work_ms,
            seed=rep_seed,
        )
        report = simulate_collaborative(rep_config)
        rates.append(report.success_rate)
        if report.response_times["mean"] > 0:
            means.append(report.response_times["mean"])
        if keep_reports:
            reports.append(report)
    n = len(rates)
    mean = sum(rates) / n
    if n > 1:
        var = sum((r - mean) ** 2 for r in rates) / (n - 1)
        half = 1.96 * math.sqrt(var / n)
    else:
        half = 0.0
    return MonteCarloReport(
        repetitions=n,
        mean_success_rate=mean,
        half_width_95=half,
        mean_response_ms=sum(means) / len(means) if means else 0.0,
        reports=tuple(reports),
    )


def simulate_delivery(plan: Plan, request: DeploymentRequest, catalog: Catalog) -> SimReport:
    """Execute a plan's tour with per-unit battery accounting.

    Each unit depletes 10% of battery per endurance interval while moving
    or station-keeping; a mission aborts (flagged as a plan/model
    disagreement) if the remaining charge would cross the 50% floor before
    returning.
    """
    if plan.certificate != "optimal":
        raise ValueError("simulate_delivery requires an optimal plan")
    usable = USABLE_BATTERY_INTERVALS * 0.1
    timeline = {}
    aborted = []
    mean_ms = plan.mean_response_ms
    for a in plan.assignments:
        uav = catalog.uav(a.uav_id)  # raises KeyError on stale plans
        cloudlet = catalog.cloudlet(a.cloudlet_id)
        interval_s = operational_time(uav, cloudlet.class_weight_gm)
        drain_per_s = 0.1 / interval_s
        t = 0.0
        charge = 1.0
        points = [(0.0, 1.0)]
        ok = True
        segments = []
        for leg in request.legs:
            segments.append(leg.distance_from_prev_m / uav.speed_m_per_s)
            segments.append(leg.dwell_s)
        segments.append(
            sum(leg.distance_from_prev_m for leg in request.legs) / uav.speed_m_per_s
        )
        for seg in segments:
            t += seg
            charge = 1.0 - drain_per_s * t
            points.append((t, charge))
            if charge < 1.0 - usable - 1e-12:
                ok = False
                break
        if not ok:
            aborted.append(f"{a.uav_id}/{a.cloudlet_id}")
        for pt in points:
            t_key = pt[0]
            if t_key not in timeline or pt[1] < timeline[t_key]:
                timeline[t_key] = pt[1]
    merged = tuple(sorted(timeline.items()))
    n_units = sum(a.count for a in plan.assignments)
    n_bad = sum(
        a.count
        for a in plan.assignments
        if f"{a.uav_id}/{a.cloudlet_id}" in aborted
    )
    return SimReport(
        success_rate=(n_units - n_bad) / n_units if n_units else 1.0,
        response_times={"mean": mean_ms, "p50": mean_ms, "p95": mean_ms},
        battery_timeline=merged,
        traces=(),
        aborted_units=tuple(aborted),
    )


def export_traces_csv(report: SimReport) -> str:
    """One row per job trace, stable column order."""
    lines = ["job_id,assigned_worker,dispatched_at_ms,outcome,completed_at_ms"]
    for t in report.traces:
        done = "" if t.completed_at_ms is None else f"{t.completed_at_ms:.3f}"
        lines.append(
            f"{t.job_id},{t.assigned_worker},{t.dispatched_at_ms:.3f},{t.outcome},{done}"
        )
    return "\n".join(lines) + "\n"
