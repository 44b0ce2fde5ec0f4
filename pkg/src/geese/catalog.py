"""Device, cloudlet, and UAV catalog: data model, validation, and loading.

The shipped default catalog transcribes the measured cloudlet rows and the
four testbed UAVs.  A catalog is immutable after load and safe to share
across concurrent planner/simulator invocations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

MODALITIES = ("aerial", "ground", "underwater")

#: Weight-class upper bound per category, in grams.
CLASS_WEIGHT_GM = {1: 100, 2: 200, 3: 300, 4: 400}

SUPPORTED_SCHEMA_VERSIONS = (1,)


class CatalogError(Exception):
    """Base error for catalog loading problems."""


class CatalogParseError(CatalogError):
    """Document does not conform to the catalog schema."""


class CatalogValidationError(CatalogError):
    """Schema-conformant document violates a catalog invariant."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class InfeasiblePairingError(CatalogError):
    """Cloudlet cannot be carried by the given UAV."""


@dataclass(frozen=True)
class DeviceSpec:
    id: str
    name: str
    cpu_desc: str
    gpu_desc: str
    ram_gb: float
    unit_weight_gm: float


@dataclass(frozen=True)
class CloudletSpec:
    id: str
    category: int  # weight class 1..4 (100..400 gm)
    type_index: int
    name: str
    devices: tuple  # of (device_id, count)
    payload_weight_gm: float  # printed component sum
    batch_latency_s: float  # time to process 10 images at 224x224
    capacity_users: tuple  # (low, high)
    cost_beta: float

    @property
    def class_weight_gm(self) -> float:
        """Nominal class weight used for planning (category x 100 gm)."""
        return self.category * 100.0


@dataclass(frozen=True)
class UavSpec:
    id: str
    modality: str
    model_name: str
    max_payload_gm: float
    endurance_points: tuple  # of (payload_gm, seconds per 10% battery interval)
    speed_m_per_s: float
    cost_alpha: float
    container_tare_gm: float = 0.0
    ballast_gm: float = 0.0


@dataclass(frozen=True)
class Calibration:
    """Optional per-catalog calibration overrides (load curves, caps)."""

    load_curves: dict = field(default_factory=dict)  # device_id -> LoadCurve-ish dict
    idle_cap_hours: float = 48.0
    link_models: dict = field(default_factory=dict)  # (regime, role) overrides


@dataclass(frozen=True)
class Catalog:
    devices: tuple
    cloudlets: tuple
    uavs: tuple
    fleet_bound: dict  # uav_id -> max available units
    calibration: Calibration = field(default_factory=Calibration)
    schema_version: int = 1

    def device(self, device_id: str) -> DeviceSpec:
        for d in self.devices:
            if d.id == device_id:
                return d
        raise KeyError(device_id)

    def cloudlet(self, cloudlet_id: str) -> CloudletSpec:
        for c in self.cloudlets:
            if c.id == cloudlet_id:
                return c
        raise KeyError(cloudlet_id)

    def uav(self, uav_id: str) -> UavSpec:
        for u in self.uavs:
            if u.id == uav_id:
                return u
        raise KeyError(uav_id)

    def to_document(self) -> dict:
        """Serialize back to the catalog document schema."""
        doc = {
            "schema_version": self.schema_version,
            "devices": [
                {
                    "id": d.id,
                    "name": d.name,
                    "cpu_desc": d.cpu_desc,
                    "gpu_desc": d.gpu_desc,
                    "ram_gb": d.ram_gb,
                    "unit_weight_gm": d.unit_weight_gm,
                }
                for d in self.devices
            ],
            "cloudlets": [
                {
                    "id": c.id,
                    "category": c.category,
                    "type_index": c.type_index,
                    "name": c.name,
                    "devices": [list(dc) for dc in c.devices],
                    "payload_weight_gm": c.payload_weight_gm,
                    "batch_latency_s": c.batch_latency_s,
                    "capacity_users": list(c.capacity_users),
                    "cost_beta": c.cost_beta,
                }
                for c in self.cloudlets
            ],
            "uavs": [
                {
                    "id": u.id,
                    "modality": u.modality,
                    "model_name": u.model_name,
                    "max_payload_gm": u.max_payload_gm,
                    "endurance_points": [list(p) for p in u.endurance_points],
                    "speed_m_per_s": u.speed_m_per_s,
                    "cost_alpha": u.cost_alpha,
                    "container_tare_gm": u.container_tare_gm,
                    "ballast_gm": u.ballast_gm,
                }
                for u in self.uavs
            ],
            "fleet_bound": dict(self.fleet_bound),
        }
        cal = {}
        if self.calibration.load_curves:
            cal["load_curves"] = {
                k: {
                    "anchor_points": [list(p) for p in v["anchor_points"]],
                    "battery_hours_at_100_users": v["battery_hours_at_100_users"],
                }
                for k, v in self.calibration.load_curves.items()
            }
        if self.calibration.idle_cap_hours != 48.0:
            cal["idle_cap_hours"] = self.calibration.idle_cap_hours
        if self.calibration.link_models:
            cal["link_models"] = dict(self.calibration.link_models)
        if cal:
            doc["calibration"] = cal
        return doc


def _require(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise CatalogParseError(f"{where}: missing required field '{key}'")
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise CatalogParseError(f"{where}.{key}: expected a number, got {value!r}")
        return float(value)
    if not isinstance(value, kind):
        raise CatalogParseError(
            f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _parse_device(entry: dict, where: str) -> DeviceSpec:
    return DeviceSpec(
        id=_require(entry, "id", str, where),
        name=_require(entry, "name", str, where),
        cpu_desc=entry.get("cpu_desc", ""),
        gpu_desc=entry.get("gpu_desc", ""),
        ram_gb=float(entry.get("ram_gb", 0)),
        unit_weight_gm=_require(entry, "unit_weight_gm", float, where),
    )


def _parse_cloudlet(entry: dict, where: str) -> CloudletSpec:
    devices = _require(entry, "devices", list, where)
    cap = _require(entry, "capacity_users", list, where)
    if len(cap) != 2:
        raise CatalogParseError(f"{where}.capacity_users: expected [low, high]")
    return CloudletSpec(
        id=_require(entry, "id", str, where),
        category=_require(entry, "category", int, where),
        type_index=int(entry.get("type_index", 1)),
        name=entry.get("name", entry["id"]),
        devices=tuple((str(d), int(n)) for d, n in devices),
        payload_weight_gm=_require(entry, "payload_weight_gm", float, where),
        batch_latency_s=_require(entry, "batch_latency_s", float, where),
        capacity_users=(int(cap[0]), int(cap[1])),
        cost_beta=_require(entry, "cost_beta", float, where),
    )


def _parse_uav(entry: dict, where: str) -> UavSpec:
    points = _require(entry, "endurance_points", list, where)
    return UavSpec(
        id=_require(entry, "id", str, where),
        modality=_require(entry, "modality", str, where),
        model_name=entry.get("model_name", entry["id"]),
        max_payload_gm=_require(entry, "max_payload_gm", float, where),
        endurance_points=tuple((float(p), float(s)) for p, s in points),
        speed_m_per_s=_require(entry, "speed_m_per_s", float, where),
        cost_alpha=_require(entry, "cost_alpha", float, where),
        container_tare_gm=float(entry.get("container_tare_gm", 0)),
        ballast_gm=float(entry.get("ballast_gm", 0)),
    )


def _validate(catalog: Catalog) -> list:
    failures = []
    seen = set()
    for d in catalog.devices:
        if d.id in seen:
            failures.append(f"duplicate device id '{d.id}'")
        seen.add(d.id)
        if d.unit_weight_gm <= 0:
            failures.append(f"device '{d.id}': unit_weight_gm must be > 0")

    device_ids = {d.id for d in catalog.devices}
    seen = set()
    for c in catalog.cloudlets:
        if c.id in seen:
            failures.append(f"duplicate cloudlet id '{c.id}'")
        seen.add(c.id)
        if c.category not in CLASS_WEIGHT_GM:
            failures.append(f"cloudlet '{c.id}': category must be one of 1..4")
            continue
        if c.payload_weight_gm > CLASS_WEIGHT_GM[c.category]:
            failures.append(
                f"cloudlet '{c.id}': payload_weight_gm {c.payload_weight_gm} exceeds "
                f"class bound {CLASS_WEIGHT_GM[c.category]}"
            )
        member_weight = 0.0
        for dev_id, count in c.devices:
            if dev_id not in device_ids:
                failures.append(f"cloudlet '{c.id}': unknown device '{dev_id}'")
                continue
            member_weight += catalog.device(dev_id).unit_weight_gm * count
        if member_weight > c.payload_weight_gm + 1e-9:
            failures.append(
                f"cloudlet '{c.id}': member device weight {member_weight} exceeds "
                f"declared payload {c.payload_weight_gm}"
            )
        low, high = c.capacity_users
        if not (0 < low <= high):
            failures.append(f"cloudlet '{c.id}': capacity range [{low},{high}] invalid")
        if c.batch_latency_s <= 0:
            failures.append(f"cloudlet '{c.id}': batch_latency_s must be > 0")

    if not catalog.uavs:
        failures.append("no UAVs defined")
    seen = set()
    for u in catalog.uavs:
        if u.id in seen:
            failures.append(f"duplicate uav id '{u.id}'")
        seen.add(u.id)
        if u.modality not in MODALITIES:
            failures.append(f"uav '{u.id}': unknown modality '{u.modality}'")
        if u.speed_m_per_s <= 0:
            failures.append(f"uav '{u.id}': speed_m_per_s must be > 0")
        payloads = [p for p, _ in u.endurance_points]
        seconds = [s for _, s in u.endurance_points]
        if len(payloads) < 2:
            failures.append(f"uav '{u.id}': needs at least two endurance points")
        if any(b <= a for a, b in zip(payloads, payloads[1:])):
            failures.append(f"uav '{u.id}': endurance payloads must strictly increase")
        if any(s <= 0 for s in seconds):
            failures.append(f"uav '{u.id}': endurance seconds must be > 0")
        if any(b > a for a, b in zip(seconds, seconds[1:])):
            failures.append(f"uav '{u.id}': endurance must be non-increasing in payload")

    uav_ids = {u.id for u in catalog.uavs}
    for uav_id, bound in catalog.fleet_bound.items():
        if uav_id not in uav_ids:
            failures.append(f"fleet_bound references unknown uav '{uav_id}'")
        elif not (isinstance(bound, int) and bound > 0):
            failures.append(f"fleet_bound['{uav_id}'] must be a positive integer")

    for c in catalog.cloudlets:
        if c.category in CLASS_WEIGHT_GM and not any(
            c.class_weight_gm <= u.max_payload_gm for u in catalog.uavs
        ):
            failures.append(f"cloudlet '{c.id}' fits no UAV")

    return failures


def load_catalog(source) -> Catalog:
    """Load and validate a catalog from a JSON document.

    ``source`` may be a dict, a JSON string, or a path to a JSON file.
    Raises CatalogParseError on schema violations and
    CatalogValidationError listing every invariant failure.
    """
    if isinstance(source, (str, Path)) and not (
        isinstance(source, str) and source.lstrip().startswith("{")
    ):
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise CatalogParseError(f"cannot read catalog file: {exc}") from exc
        source = text
    if isinstance(source, str):
        try:
            doc = json.loads(source)
        except json.JSONDecodeError as exc:
            raise CatalogParseError(
                f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    else:
        doc = source
    if not isinstance(doc, dict):
        raise CatalogParseError("catalog document must be a JSON object")

    version = _require(doc, "schema_version", int, "catalog")
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise CatalogParseError(f"unsupported schema_version {version}")

    devices = tuple(
        _parse_device(e, f"devices[{i}]")
        for i, e in enumerate(doc.get("devices", []))
    )
    cloudlets = tuple(
        _parse_cloudlet(e, f"cloudlets[{i}]")
        for i, e in enumerate(doc.get("cloudlets", []))
    )
    uavs = tuple(
        _parse_uav(e, f"uavs[{i}]") for i, e in enumerate(doc.get("uavs", []))
    )
    bounds_doc = doc.get("fleet_bound", {})
    if not isinstance(bounds_doc, dict):
        raise CatalogParseError("catalog.fleet_bound: expected an object")
    fleet_bound = {u.id: int(bounds_doc.get(u.id, 3)) for u in uavs}

    cal_doc = doc.get("calibration", {})
    calibration = Calibration(
        load_curves={
            k: {
                "anchor_points": [tuple(p) for p in v["anchor_points"]],
                "battery_hours_at_100_users": float(
                    v["battery_hours_at_100_users"]
                ),
            }
            for k, v in cal_doc.get("load_curves", {}).items()
        },
        idle_cap_hours=float(cal_doc.get("idle_cap_hours", 48.0)),
        link_models=dict(cal_doc.get("link_models", {})),
    )

    catalog = Catalog(
        devices=devices,
        cloudlets=cloudlets,
        uavs=uavs,
        fleet_bound=fleet_bound,
        calibration=calibration,
        schema_version=version,
    )
    failures = _validate(catalog)
    if failures:
        raise CatalogValidationError(failures)
    return catalog


def default_catalog() -> Catalog:
    """The shipped catalog: measured cloudlet rows plus the four testbed UAVs."""
    text = resources.files("geese.data").joinpath("default_catalog.json").read_text()
    return load_catalog(text)


def effective_payload(cloudlet: CloudletSpec, uav: UavSpec) -> float:
    """Payload weight in grams that drives the UAV endurance lookup.

    The endurance curves were measured with each modality's container in
    place (underwater curves with the 830 gm ballast already neutralizing
    buoyancy), so the effective payload is the nominal class weight for
    every modality.
    """
    weight = cloudlet.class_weight_gm
    if weight > uav.max_payload_gm:
        raise InfeasiblePairingError(
            f"cloudlet '{cloudlet.id}' ({weight} gm) exceeds "
            f"uav '{uav.id}' max payload {uav.max_payload_gm} gm"
        )
    return weight


def cloudlet_capacity(cloudlet: CloudletSpec) -> int:
    """Conservative planning capacity: low end of the measured user range."""
    return cloudlet.capacity_users[0]
