"""Exact solver for the UAV/cloudlet allocation problem.

Decision variables are nonnegative integer unit counts per (UAV type,
cloudlet type) pairing, bounded by the per-type fleet limit.  The
objective sums the transport and cloudlet cost weights over selected
units; constraints cover workload capacity, the fleet-mean response
bound, per-unit round-trip endurance, and per-leg modality restrictions.

Costs and response metrics are held in fixed-point int64 internally so
that solve and the exhaustive oracle agree bit-for-bit on optima and
tie-breaking.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .catalog import MODALITIES, Catalog, cloudlet_capacity, effective_payload
from .perf_models import (
    USABLE_BATTERY_INTERVALS,
    _interpolate as _interpolate_curve,
    operational_time,
)

COST_SCALE = 10**6  # fixed-point units per cost unit
METRIC_SCALE = 10**3  # fixed-point units per millisecond

ORACLE_DEFAULT_MAX_CANDIDATES = 10**7
_ORACLE_CHUNK = 1 << 17


class PlannerError(Exception):
    pass


class OracleRefusal(PlannerError):
    """Search space too large for exhaustive enumeration."""

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(
            f"oracle refuses: {size} candidate vectors exceed limit {limit}"
        )


@dataclass(frozen=True)
class Leg:
    location_id: str
    allowed_modalities: tuple = MODALITIES
    dwell_s: float = 0.0
    distance_from_prev_m: float = 0.0


@dataclass(frozen=True)
class DeploymentRequest:
    workload_users: int
    response_bound_ms: float
    legs: tuple
    response_metric: str = "image"  # image: per-image batch latency; web: load curve
    response_mode: str = "per_unit"  # per_unit: capacity-share mean; literal: constant mean
    cost_overrides: Optional[dict] = None  # {"alpha": {uav: v}, "beta": {cloudlet: v}}

    def validate(self):
        if self.workload_users < 0:
            raise PlannerError("workload_users must be >= 0")
        if self.response_bound_ms <= 0:
            raise PlannerError("response_bound_ms must be > 0")
        if not self.legs:
            raise PlannerError("at least one leg is required")
        for leg in self.legs:
            if not leg.allowed_modalities:
                raise PlannerError(f"leg '{leg.location_id}': no modality allowed")
            for m in leg.allowed_modalities:
                if m not in MODALITIES:
                    raise PlannerError(
                        f"leg '{leg.location_id}': unknown modality '{m}'"
                    )
        if self.response_metric not in ("image", "web"):
            raise PlannerError(f"unknown response_metric '{self.response_metric}'")
        if self.response_mode not in ("per_unit", "literal"):
            raise PlannerError(f"unknown response_mode '{self.response_mode}'")


@dataclass(frozen=True)
class Pair:
    """One admissible (UAV type, cloudlet type) pairing."""

    uav_id: str
    cloudlet_id: str
    type_idx: int  # index into model.uav_ids
    unit_cost_fp: int
    capacity: int
    metric_fp: int  # per-unit response metric, fixed point ms; for the
    # load-dependent web metric this is the lightest-load lower bound
    payload_gm: int
    tour_time_s: float
    endurance_budget_s: float
    web_anchor_points: Optional[tuple] = None  # load curve, web metric only
    web_device_units: int = 1


@dataclass(frozen=True)
class Excluded:
    uav_id: str
    cloudlet_id: str
    reason: str  # modality | roundtrip | metric
    shortfall: float


@dataclass
class PlanningModel:
    request: DeploymentRequest
    catalog: Catalog
    pairs: list  # admissible Pair, catalog order
    excluded: list  # Excluded pairings
    uav_ids: list  # uav ids with at least one admissible pair, catalog order
    bounds: list  # fleet bound per uav_ids entry
    workload: int
    tau_fp: int  # response bound, fixed point ms
    constant_metric: bool = True

    @property
    def n_variables(self) -> int:
        return len(self.pairs) + len(self.excluded)

    def fleet_counts(self, counts) -> dict:
        used = {u: 0 for u in self.uav_ids}
        for pair, x in zip(self.pairs, counts):
            used[pair.uav_id] += x
        return used

    def unit_metric_fp(self, pair: Pair, total_cap: int) -> int:
        """Response metric of one unit of ``pair`` within a selected fleet.

        Constant metrics ignore the fleet; the web metric evaluates the
        device load curve at the unit's capacity-proportional user share
        (rounded up, floor of one user, load clamped to the benchmark
        ceiling).
        """
        if self.constant_metric or pair.web_anchor_points is None:
            return pair.metric_fp
        share = (
            -(-self.workload * pair.capacity // total_cap) if total_cap else 1
        )
        load = max(1, min(100, -(-max(share, 1) // pair.web_device_units)))
        return round(
            _interpolate_curve(pair.web_anchor_points, float(load)) * METRIC_SCALE
        )

    def metric_total_fp(self, counts) -> int:
        """Sum of per-unit response metrics over the selected fleet."""
        total_cap = sum(p.capacity * x for p, x in zip(self.pairs, counts))
        return sum(
            self.unit_metric_fp(p, total_cap) * x
            for p, x in zip(self.pairs, counts)
            if x
        )

    def mean_response_fp(self, counts) -> float:
        """Fleet-mean response in fixed-point ms; 0 for an empty fleet."""
        units = sum(counts)
        if units == 0:
            return 0.0
        return self.metric_total_fp(counts) / units

    def check(self, counts) -> bool:
        """Independent re-validation of a candidate against all constraints."""
        if len(counts) != len(self.pairs):
            return False
        if any(x < 0 for x in counts):
            return False
        used = self.fleet_counts(counts)
        for u, b in zip(self.uav_ids, self.bounds):
            if used[u] > b:
                return False
        cap = sum(p.capacity * x for p, x in zip(self.pairs, counts))
        if cap < self.workload:
            return False
        units = sum(counts)
        if units > 0:
            if self.metric_total_fp(counts) > self.tau_fp * units:
                return False
        return True

    def cost_fp(self, counts) -> int:
        return sum(p.unit_cost_fp * x for p, x in zip(self.pairs, counts))

    def payload_total(self, counts) -> int:
        return sum(p.payload_gm * x for p, x in zip(self.pairs, counts))

    def solution_key(self, counts):
        return (self.cost_fp(counts), self.payload_total(counts), tuple(counts))


@dataclass(frozen=True)
class Assignment:
    uav_id: str
    cloudlet_id: str
    count: int
    legs: tuple
    round_trip_s: float
    endurance_budget_s: float


@dataclass(frozen=True)
class Plan:
    certificate: str  # "optimal"
    assignments: tuple
    total_cost: float
    capacity_total: int
    mean_response_ms: float
    slack: dict

    def to_document(self) -> dict:
        return {
            "certificate": self.certificate,
            "assignments": [
                {
                    "uav": a.uav_id,
                    "cloudlet": a.cloudlet_id,
                    "count": a.count,
                    "legs": list(a.legs),
                    "round_trip_s": a.round_trip_s,
                    "endurance_budget_s": a.endurance_budget_s,
                }
                for a in self.assignments
            ],
            "total_cost": self.total_cost,
            "capacity_total": self.capacity_total,
            "mean_response_ms": self.mean_response_ms,
            "slack": self.slack,
        }


def plan_from_document(doc: dict) -> Plan:
    """Rebuild a Plan from its serialized document."""
    return Plan(
        certificate=doc["certificate"],
        assignments=tuple(
            Assignment(
                uav_id=a["uav"],
                cloudlet_id=a["cloudlet"],
                count=int(a["count"]),
                legs=tuple(a.get("legs", ())),
                round_trip_s=float(a.get("round_trip_s", 0.0)),
                endurance_budget_s=float(a.get("endurance_budget_s", 0.0)),
            )
            for a in doc["assignments"]
        ),
        total_cost=float(doc["total_cost"]),
        capacity_total=int(doc["capacity_total"]),
        mean_response_ms=float(doc["mean_response_ms"]),
        slack=doc.get("slack", {}),
    )


@dataclass(frozen=True)
class Infeasibility:
    certificate: str  # "infeasible"
    violated: tuple  # of (constraint_id, shortfall)

    def to_document(self) -> dict:
        return {
            "certificate": self.certificate,
            "violated": [
                {"constraint": c, "shortfall": s} for c, s in self.violated
            ],
        }


def canonical_json(document: dict) -> str:
    """Stable serialization for golden files and digests."""
    return json.dumps(document, sort_keys=True, separators=(",", ":")) + "\n"


def _tour_time_s(request: DeploymentRequest, speed_m_per_s: float) -> float:
    """Full tour: source -> legs in order -> retrace back to source."""
    outbound = sum(leg.distance_from_prev_m for leg in request.legs)
    dwell = sum(leg.dwell_s for leg in request.legs)
    return 2.0 * outbound / speed_m_per_s + dwell


def _web_curve(cloudlet, catalog: Catalog):
    """(anchor points, device units) of the first curve-calibrated device."""
    from .perf_models import DEFAULT_LOAD_CURVES

    for dev_id, count in cloudlet.devices:
        if dev_id in catalog.calibration.load_curves:
            raw = catalog.calibration.load_curves[dev_id]
            return tuple(tuple(p) for p in raw["anchor_points"]), count
        if dev_id in DEFAULT_LOAD_CURVES:
            return DEFAULT_LOAD_CURVES[dev_id].anchor_points, count
    raise PlannerError(
        f"cloudlet '{cloudlet.id}' has no device with a calibrated load curve"
    )


def build_model(request: DeploymentRequest, catalog: Catalog) -> PlanningModel:
    """Assemble the integer program for a request over a catalog.

    Pairings that violate modality restrictions or whose full tour exceeds
    the usable endurance budget are excluded up front with a diagnosis.
    """
    request.validate()
    overrides = request.cost_overrides or {}
    alpha_over = overrides.get("alpha", {})
    beta_over = overrides.get("beta", {})

    allowed = set(MODALITIES)
    for leg in request.legs:
        allowed &= set(leg.allowed_modalities)

    pairs = []
    excluded = []
    for uav in catalog.uavs:
        tour = _tour_time_s(request, uav.speed_m_per_s)
        for cloudlet in catalog.cloudlets:
            if uav.modality not in allowed:
                excluded.append(Excluded(uav.id, cloudlet.id, "modality", 1.0))
                continue
            try:
                payload = effective_payload(cloudlet, uav)
                per_interval = operational_time(uav, payload)
            except Exception:
                excluded.append(Excluded(uav.id, cloudlet.id, "modality", 1.0))
                continue
            budget = per_interval * USABLE_BATTERY_INTERVALS
            if tour > budget:
                excluded.append(
                    Excluded(uav.id, cloudlet.id, "roundtrip", tour - budget)
                )
                continue
            alpha = float(alpha_over.get(uav.id, uav.cost_alpha))
            beta = float(beta_over.get(cloudlet.id, cloudlet.cost_beta))
            web_curve = None
            device_units = 1
            if request.response_metric == "image":
                # per-image latency from the 10-image batch measurement
                metric = cloudlet.batch_latency_s * 100.0
            else:
                try:
                    web_curve, device_units = _web_curve(cloudlet, catalog)
                except PlannerError:
                    # no benchmarked web-server device in this cloudlet
                    excluded.append(Excluded(uav.id, cloudlet.id, "metric", 1.0))
                    continue
                if request.response_mode == "literal":
                    # load-independent constant at the benchmark ceiling
                    metric = _interpolate_curve(web_curve, 100.0)
                    web_curve = None
                else:
                    metric = _interpolate_curve(web_curve, 1.0)  # lower bound
            pairs.append(
                Pair(
                    uav_id=uav.id,
                    cloudlet_id=cloudlet.id,
                    type_idx=-1,  # patched below
                    unit_cost_fp=round((alpha + beta) * COST_SCALE),
                    capacity=cloudlet_capacity(cloudlet),
                    metric_fp=round(metric * METRIC_SCALE),
                    payload_gm=int(cloudlet.class_weight_gm),
                    tour_time_s=tour,
                    endurance_budget_s=budget,
                    web_anchor_points=web_curve,
                    web_device_units=device_units,
                )
            )

    uav_ids = [u.id for u in catalog.uavs if any(p.uav_id == u.id for p in pairs)]
    idx = {u: i for i, u in enumerate(uav_ids)}
    pairs = [
        Pair(
            p.uav_id, p.cloudlet_id, idx[p.uav_id], p.unit_cost_fp, p.capacity,
            p.metric_fp, p.payload_gm, p.tour_time_s, p.endurance_budget_s,
            p.web_anchor_points, p.web_device_units,
        )
        for p in pairs
    ]
    return PlanningModel(
        request=request,
        catalog=catalog,
        pairs=pairs,
        excluded=excluded,
        uav_ids=uav_ids,
        bounds=[catalog.fleet_bound[u] for u in uav_ids],
        workload=int(request.workload_users),
        tau_fp=round(request.response_bound_ms * METRIC_SCALE),
        constant_metric=(
            request.response_metric == "image" or request.response_mode == "literal"
        ),
    )


def diagnose(model: PlanningModel) -> Infeasibility:
    """Explain why no feasible assignment exists."""
    violated = []
    if not model.pairs:
        reasons = {}
        for ex in model.excluded:
            cur = reasons.get(ex.reason)
            if cur is None or ex.shortfall < cur:
                reasons[ex.reason] = ex.shortfall
        for reason in ("modality", "roundtrip", "metric"):
            if reason in reasons:
                violated.append((reason, reasons[reason]))
        if not violated:
            violated.append(("workload", float(model.workload)))
        return Infeasibility("infeasible", tuple(violated))

    ok = [p for p in model.pairs if p.metric_fp <= model.tau_fp]
    if model.workload > 0 and not ok:
        min_metric = min(p.metric_fp for p in model.pairs)
        violated.append(
            ("response", (min_metric - model.tau_fp) / METRIC_SCALE)
        )
        return Infeasibility("infeasible", tuple(violated))

    max_cap = 0
    for u, bound in zip(model.uav_ids, model.bounds):
        caps = [p.capacity for p in ok if p.uav_id == u]
        if caps:
            max_cap += bound * max(caps)
    if max_cap < model.workload:
        violated.append(("workload", float(model.workload - max_cap)))
        return Infeasibility("infeasible", tuple(violated))

    raise PlannerError("diagnose called on a feasible model")


def _build_plan(model: PlanningModel, counts) -> Plan:
    legs = tuple(leg.location_id for leg in model.request.legs)
    assignments = []
    for pair, x in zip(model.pairs, counts):
        if x == 0:
            continue
        assignments.append(
            Assignment(
                uav_id=pair.uav_id,
                cloudlet_id=pair.cloudlet_id,
                count=x,
                legs=legs,
                round_trip_s=pair.tour_time_s,
                endurance_budget_s=pair.endurance_budget_s,
            )
        )
    cap = sum(p.capacity * x for p, x in zip(model.pairs, counts))
    units = sum(counts)
    mean_fp = model.metric_total_fp(counts) / units if units else 0.0
    used = model.fleet_counts(counts)
    slack = {
        "workload": cap - model.workload,
        "response": (model.tau_fp - mean_fp) / METRIC_SCALE if units else None,
        "roundtrip": {
            a.uav_id: a.endurance_budget_s - a.round_trip_s for a in assignments
        },
        "fleet": {
            u: b - used[u] for u, b in zip(model.uav_ids, model.bounds)
        },
    }
    return Plan(
        certificate="optimal",
        assignments=tuple(assignments),
        total_cost=model.cost_fp(counts) / COST_SCALE,
        capacity_total=cap,
        mean_response_ms=mean_fp / METRIC_SCALE,
        slack=slack,
    )


def _greedy_upper_bound(model: PlanningModel):
    """A feasible solution to seed branch-and-bound pruning, if one exists."""
    if model.workload == 0:
        return [0] * len(model.pairs)
    usable = [
        (i, p) for i, p in enumerate(model.pairs) if p.metric_fp <= model.tau_fp
    ]
    order = sorted(usable, key=lambda ip: (ip[1].unit_cost_fp / max(ip[1].capacity, 1)))
    counts = [0] * len(model.pairs)
    remaining = list(model.bounds)
    cap = 0
    for i, p in order:
        while remaining[p.type_idx] > 0 and cap < model.workload:
            counts[i] += 1
            remaining[p.type_idx] -= 1
            cap += p.capacity
        if cap >= model.workload:
            break
    return counts if model.check(counts) else None


def solve(model: PlanningModel):
    """Exact optimum by depth-first branch and bound.

    Returns a Plan with an optimality certificate, or an Infeasibility.
    Tie-breaking is the deterministic key (cost, total payload weight,
    counts vector in catalog order), identical to oracle_enumerate.
    """
    n = len(model.pairs)
    if n == 0:
        if model.workload == 0:
            return _build_plan(model, [])
        return diagnose(model)
    if (
        model.workload > 0
        and model.constant_metric
        and all(p.metric_fp > model.tau_fp for p in model.pairs)
    ):
        # every unit exceeds the bound, so any nonempty fleet's mean does too
        return diagnose(model)

    pairs = model.pairs
    # suffix aggregates for pruning
    # max extra capacity obtainable from pairs i.. given fresh type bounds
    suffix_maxcap = [0] * (n + 1)
    best_cap_by_type = {}
    for i in range(n - 1, -1, -1):
        p = pairs[i]
        prev = best_cap_by_type.get(p.type_idx, 0)
        gain = 0
        if p.capacity > prev:
            gain = model.bounds[p.type_idx] * (p.capacity - prev)
            best_cap_by_type[p.type_idx] = p.capacity
        suffix_maxcap[i] = suffix_maxcap[i + 1] + gain
    best_cap_by_type = {}
    # min cost per unit capacity over pairs i.. (float, fractional bound)
    suffix_ratio = [math.inf] * (n + 1)
    for i in range(n - 1, -1, -1):
        p = pairs[i]
        r = p.unit_cost_fp / p.capacity if p.capacity > 0 else math.inf
        suffix_ratio[i] = min(suffix_ratio[i + 1], r)

    best = {"key": None}
    seed = _greedy_upper_bound(model)
    if seed is not None:
        best["key"] = model.solution_key(seed)

    counts = [0] * n
    remaining = list(model.bounds)

    def leaf(cost_fp, cap, metric_total_fp, units, payload):
        if cap < model.workload:
            return
        if units > 0:
            if not model.constant_metric:
                metric_total_fp = model.metric_total_fp(counts)
            if metric_total_fp > model.tau_fp * units:
                return
        key = (cost_fp, payload, tuple(counts))
        if best["key"] is None or key < best["key"]:
            best["key"] = key

    def dfs(i, cost_fp, cap, metric_total_fp, units, payload):
        deficit = model.workload - cap
        if deficit > suffix_maxcap[i]:
            return
        if best["key"] is not None:
            lb = cost_fp
            if deficit > 0:
                lb += deficit * suffix_ratio[i]
            if lb > best["key"][0] + 0.5:
                return
        if i == n:
            leaf(cost_fp, cap, metric_total_fp, units, payload)
            return
        p = pairs[i]
        for x in range(remaining[p.type_idx] + 1):
            counts[i] = x
            remaining[p.type_idx] -= x
            dfs(
                i + 1,
                cost_fp + x * p.unit_cost_fp,
                cap + x * p.capacity,
                metric_total_fp + x * p.metric_fp,
                units + x,
                payload + x * p.payload_gm,
            )
            remaining[p.type_idx] += x
        counts[i] = 0

    dfs(0, 0, 0, 0, 0, 0)
    if best["key"] is None:
        return diagnose(model)
    return _build_plan(model, list(best["key"][2]))


def _type_combos(model: PlanningModel, type_idx: int):
    """All count vectors for one UAV type's pairs, sum <= fleet bound."""
    pair_idx = [i for i, p in enumerate(model.pairs) if p.type_idx == type_idx]
    bound = model.bounds[type_idx]
    combos = []

    def rec(pos, left, current):
        if pos == len(pair_idx):
            combos.append(tuple(current))
            return
        for x in range(left + 1):
            current.append(x)
            rec(pos + 1, left - x, current)
            current.pop()

    rec(0, bound, [])
    return pair_idx, combos


def oracle_enumerate(
    model: PlanningModel, max_candidates: int = ORACLE_DEFAULT_MAX_CANDIDATES
):
    """Exhaustive scan over the bounded integer space.

    Independent of the branch-and-bound path; used in tests and --verify.
    Refuses with a size estimate when the space exceeds ``max_candidates``.
    """
    n = len(model.pairs)
    if n == 0:
        if model.workload == 0:
            return _build_plan(model, [])
        return diagnose(model)

    blocks = []
    total = 1
    for t in range(len(model.uav_ids)):
        pair_idx, combos = _type_combos(model, t)
        total *= len(combos)
        blocks.append((pair_idx, combos))
    if total > max_candidates:
        raise OracleRefusal(total, max_candidates)

    if not model.constant_metric:
        return _oracle_scan_python(model, blocks)

    tau = model.tau_fp
    # per-block aggregate arrays
    agg = []
    for pair_idx, combos in blocks:
        arr = np.zeros((len(combos), 5), dtype=np.int64)  # cost, cap, exc, payload, _
        for k, combo in enumerate(combos):
            cost = cap = exc = payload = 0
            for i, x in zip(pair_idx, combo):
                p = model.pairs[i]
                cost += x * p.unit_cost_fp
                cap += x * p.capacity
                exc += x * (p.metric_fp - tau)
                payload += x * p.payload_gm
            arr[k] = (cost, cap, exc, payload, 0)
        agg.append(arr)

    # materialize the cartesian product of leading blocks up to a chunk
    # size, loop in Python over the rest
    mat_upto = 0
    size = 1
    while mat_upto < len(blocks) and size * len(blocks[mat_upto][1]) <= _ORACLE_CHUNK:
        size *= len(blocks[mat_upto][1])
        mat_upto += 1
    mat = np.zeros((1, 4), dtype=np.int64)
    mat_idx = np.zeros((1, 0), dtype=np.int64)
    for t in range(mat_upto):
        a = agg[t][:, :4]
        k = len(a)
        m = len(mat)
        mat = np.repeat(mat, k, axis=0) + np.tile(a, (m, 1))
        mat_idx = np.hstack(
            [
                np.repeat(mat_idx, k, axis=0),
                np.tile(np.arange(k, dtype=np.int64)[:, None], (m, 1)),
            ]
        )

    loop_blocks = list(range(mat_upto, len(blocks)))
    best_key = None
    best_combo = None  # per-block combo indices

    cost0, cap0, exc0, pay0 = mat[:, 0], mat[:, 1], mat[:, 2], mat[:, 3]
    for tail in itertools.product(
        *[range(len(blocks[t][1])) for t in loop_blocks]
    ):
        off = np.zeros(4, dtype=np.int64)
        for t, k in zip(loop_blocks, tail):
            off += agg[t][k, :4]
        cap = cap0 + off[1]
        exc = exc0 + off[2]
        feasible = (cap >= model.workload) & (exc <= 0)
        if not feasible.any():
            continue
        cost = cost0 + off[0]
        sel = np.flatnonzero(feasible)
        c = cost[sel]
        cmin = c.min()
        if best_key is not None and cmin > best_key[0]:
            continue
        sel = sel[c == cmin]
        pay = pay0[sel] + off[3]
        pmin = pay.min()
        if best_key is not None and (cmin, pmin) > best_key[:2]:
            continue
        sel = sel[pay == pmin]
        for row in sel:
            combo = tuple(mat_idx[row]) + tail
            counts = _combo_to_counts(model, blocks, combo)
            key = (int(cmin), int(pmin), tuple(counts))
            if best_key is None or key < best_key:
                best_key = key
                best_combo = combo

    if best_key is None:
        return diagnose(model)
    return _build_plan(model, list(best_key[2]))


def _oracle_scan_python(model: PlanningModel, blocks):
    """Plain exhaustive scan; used when the response metric is fleet-dependent."""
    best_key = None
    for combo in itertools.product(*[range(len(b[1])) for b in blocks]):
        counts = _combo_to_counts(model, blocks, combo)
        if not model.check(counts):
            continue
        key = model.solution_key(counts)
        if best_key is None or key < best_key:
            best_key = key
    if best_key is None:
        return diagnose(model)
    return _build_plan(model, list(best_key[2]))


def _combo_to_counts(model, blocks, combo):
    counts = [0] * len(model.pairs)
    for (pair_idx, combos), k in zip(blocks, combo):
        for i, x in zip(pair_idx, combos[k]):
            counts[i] = x
    return counts


def plan_multi_leg(request: DeploymentRequest, catalog: Catalog):
    """Plan a single fleet serving all legs sequentially (A -> B re-allocation)."""
    return solve(build_model(request, catalog))
