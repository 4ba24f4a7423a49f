"""Scenario configuration file handling"""

from __future__ import annotations

import dataclasses
import json
import os.path
from dataclasses import dataclass, field
from glob import glob
from typing import Any

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from jsonschema import Draft7Validator

import accsim
from accsim.attack import AttackSpec
from accsim.exception import AccsimException, ConfigurationException
from accsim.metrics import MetricsSettings
from accsim.model.idm import IdmParams
from accsim.model.ovrv import OvrvParams
from accsim.scenario import Acc, Hdv, Leader, Scenario, VehicleSpec
from accsim.util import parse_window
from accsim.validate import MeasurementDomain

logger = accsim.logger

_NUMBER = {"type": "number"}
_POSITIVE = {"type": "number", "exclusiveMinimum": 0}
_WINDOW = {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}


def _params_schema(*names: str) -> dict[str, Any]:
    return {
        "type": "object",
        "properties": {name: _POSITIVE for name in names},
        "additionalProperties": False,
    }


def _only_for(kind: str, allowed: dict[str, Any]) -> dict[str, Any]:
    forbidden = {key: False for key in ("length", "params", "attack")}
    forbidden.update(allowed)
    return {
        "if": {"properties": {"kind": {"const": kind}}},
        "then": {"properties": forbidden},
    }


ATTACK_SCHEMA = {
    "type": "object",
    "properties": {
        "g1": {"type": "string", "minLength": 1},
        "g2": {"type": "string", "minLength": 1},
        "mode": {"enum": ["additive", "multiplicative"]},
        "window": _WINDOW,
    },
    "required": ["g1", "g2"],
    "additionalProperties": False,
}

VEHICLE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["leader", "hdv", "acc"]},
        "length": _POSITIVE,
        "params": {"type": "object"},
        "attack": ATTACK_SCHEMA,
    },
    "required": ["kind"],
    "additionalProperties": False,
    "allOf": [
        _only_for("leader", {"length": _POSITIVE}),
        _only_for(
            "hdv", {"params": _params_schema("v0", "T", "s0", "a", "b", "length")}
        ),
        _only_for(
            "acc",
            {
                "params": _params_schema("k1", "k2", "eta", "tau", "length"),
                "attack": ATTACK_SCHEMA,
            },
        ),
    ],
}

SCENARIO_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "preset": {"type": "string"},
        "dt": _POSITIVE,
        "t_end": _POSITIVE,
        "v_star": {"type": "number", "minimum": 0},
        "accel_max": _POSITIVE,
        "decel_max": _POSITIVE,
        "v_max": _POSITIVE,
        "vehicles": {"type": "array", "items": VEHICLE_SCHEMA, "minItems": 2},
        "metrics": {
            "type": "object",
            "properties": {
                "asv_window": _WINDOW,
                "fuel_window": {
                    "type": ["array", "null"],
                    "items": _NUMBER,
                    "minItems": 2,
                    "maxItems": 2,
                },
                "first": {"type": "integer", "minimum": 1},
                "last": {"type": ["integer", "null"], "minimum": 1},
            },
            "additionalProperties": False,
        },
        "domain": {
            "type": "object",
            "properties": {
                "s_range": _WINDOW,
                "dv_range": _WINDOW,
                "grid_points": {"type": "integer"},
            },
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {"svg": {"type": "boolean"}},
            "additionalProperties": False,
        },
    },
    "required": ["vehicles"],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully validated scenario together with the settings of its
    metrics, its admissibility checks and its outputs."""

    scenario: Scenario
    metrics: MetricsSettings = field(default_factory=MetricsSettings)
    domain: MeasurementDomain = field(default_factory=MeasurementDomain)
    svg: bool | None = None
    preset: str | None = None

    @property
    def name(self) -> str:
        return self.scenario.name

    def with_dt(self, dt: float) -> ScenarioConfig:
        try:
            return dataclasses.replace(self, scenario=self.scenario.with_dt(dt))
        except ConfigurationException as err:
            raise ConfigurationException(f"--dt {dt}: {err.message}")

    def as_dict(self) -> dict[str, Any]:
        sc = self.scenario
        result = {"name": sc.name}
        if self.preset is not None:
            result["preset"] = self.preset
        result.update(
            dt=sc.dt,
            t_end=sc.t_end,
            v_star=sc.v_star,
            accel_max=sc.accel_max,
            decel_max=sc.decel_max,
            v_max=sc.v_max,
            vehicles=[_vehicle_dict(spec) for spec in sc.vehicles],
            metrics=self.metrics.as_dict(),
            domain=self.domain.as_dict(),
        )
        if self.svg is not None:
            result["output"] = {"svg": self.svg}
        return result


def _vehicle_dict(spec: VehicleSpec) -> dict[str, Any]:
    if isinstance(spec, Leader):
        return {"kind": spec.kind, "length": spec.length}
    result = {"kind": spec.kind, "params": dataclasses.asdict(spec.params)}
    if isinstance(spec, Acc) and spec.attack is not None:
        result["attack"] = spec.attack.as_dict()
    return result


def _schema_errors(data: Any) -> list[str]:
    validator = Draft7Validator(SCENARIO_SCHEMA)
    errors = []
    for error in sorted(validator.iter_errors(data), key=lambda e: list(e.path)):
        location = "/".join(str(part) for part in error.path) or "(root)"
        errors.append(f"{location}: {error.message}")
    return errors


def _build_vehicle(idx: int, entry: dict[str, Any], errors: list[str]) -> Any:
    kind = entry["kind"]
    try:
        if kind == "leader":
            return Leader(**{k: v for k, v in entry.items() if k == "length"})
        if kind == "hdv":
            return Hdv(IdmParams(**entry.get("params", {})))
        attack = None
        if "attack" in entry:
            attack = AttackSpec.from_strings(**entry["attack"])
        return Acc(OvrvParams(**entry.get("params", {})), attack)
    except AccsimException as err:
        errors.append(f"vehicles/{idx}: {err.format_message()}")
        return None


def _window(value: Any, name: str, errors: list[str]) -> tuple[float, float] | None:
    try:
        return parse_window(value, name)
    except ValueError as err:
        errors.append(str(err))
        return None


def _build_metrics(
    data: dict[str, Any], t_end: float, n_vehicles: int, errors: list[str]
) -> MetricsSettings | None:
    defaults = MetricsSettings()
    if "asv_window" in data or defaults.asv_window[1] <= t_end:
        asv_window = _window(
            data.get("asv_window", defaults.asv_window), "metrics/asv_window", errors
        )
    else:
        # short horizons measure smoothness over the whole run
        asv_window = (0.0, t_end)
    fuel_window = data.get("fuel_window")
    if fuel_window is not None:
        fuel_window = _window(fuel_window, "metrics/fuel_window", errors)
    first = data.get("first", defaults.first)
    last = data.get("last")
    for name, window in (("asv_window", asv_window), ("fuel_window", fuel_window)):
        if window is not None and not (0 <= window[0] and window[1] <= t_end):
            errors.append(
                f"metrics/{name} {list(window)} is outside the horizon [0, {t_end}]"
            )
    if not first <= (n_vehicles if last is None else last) <= n_vehicles:
        errors.append(
            f"metrics vehicle range {first}..{last} does not fit a platoon "
            f"of {n_vehicles} vehicles"
        )
    if asv_window is None:
        return None
    return MetricsSettings(asv_window, fuel_window, first, last)


def config_from_dict(data: Any, source: str = "<dict>") -> ScenarioConfig:
    """Validate a configuration mapping and build the ScenarioConfig. Every
    violation found is reported in a single ConfigurationException."""

    errors = _schema_errors(data)
    if errors:
        raise ConfigurationException(
            f"{source} is not a valid scenario:\n  " + "\n  ".join(errors)
        )

    vehicles = [
        _build_vehicle(idx, entry, errors)
        for idx, entry in enumerate(data["vehicles"])
    ]
    settings = {
        key: data[key]
        for key in ("dt", "t_end", "v_star", "accel_max", "decel_max", "v_max")
        if key in data
    }
    name = data.get("name") or os.path.splitext(os.path.basename(source))[0]
    sc = None
    if None not in vehicles:
        try:
            sc = Scenario(tuple(vehicles), name=name, **settings)
        except ConfigurationException as err:
            errors.append(err.message)
    metrics = _build_metrics(
        data.get("metrics", {}),
        float(settings.get("t_end", Scenario.t_end)),
        len(vehicles),
        errors,
    )
    domain = None
    try:
        domain = MeasurementDomain(**data.get("domain", {}))
    except ConfigurationException as err:
        errors.append(f"domain: {err.message}")

    if errors:
        raise ConfigurationException(
            f"{source} is not a valid scenario:\n  " + "\n  ".join(errors)
        )
    logger.debug(f"read scenario '{name}' from {source}")
    return ScenarioConfig(
        sc,
        metrics,
        domain,
        svg=data.get("output", {}).get("svg"),
        preset=data.get("preset"),
    )


def read_file(path: str) -> Any:
    """Read a JSON or TOML scenario file into plain data."""

    try:
        if path.endswith(".toml"):
            logger.debug(f"Reading scenario file {path} in TOML format")
            with open(path, "rb") as scenfile:
                return tomllib.load(scenfile)
        logger.debug(f"Reading scenario file {path} in JSON format")
        with open(path, encoding="utf-8-sig") as scenfile:
            return json.load(scenfile)
    except OSError as err:
        raise ConfigurationException(f"cannot read scenario file '{path}': {err}")
    except tomllib.TOMLDecodeError as err:
        raise ConfigurationException(f"Parsing TOML file '{path}' failed: {err}")
    except json.JSONDecodeError as err:
        raise ConfigurationException(
            f"Parsing JSON file '{path}' failed at line {err.lineno} "
            f"column {err.colno}: {err.msg}"
        )


def load_config(path: str) -> ScenarioConfig:
    return config_from_dict(read_file(path), source=path)


def dump_config(cfg: ScenarioConfig) -> str:
    """Serialize the configuration as canonical JSON that load_config reads
    back to an equal ScenarioConfig."""
    return json.dumps(cfg.as_dict(), indent=2) + "\n"


def scenario_files(directory: str) -> dict[str, str]:
    """Map scenario names to the JSON and TOML files in a directory, named
    after the file."""

    files = glob(os.path.join(directory, "*.json"))
    files.extend(glob(os.path.join(directory, "*.toml")))
    result = {}
    for path in sorted(files):
        name = os.path.splitext(os.path.basename(path))[0]
        if name in result:
            raise ConfigurationException(
                f'While reading from "{path}": scenario "{name}" already '
                "exists in another file in the directory."
            )
        result[name] = path
    return result
