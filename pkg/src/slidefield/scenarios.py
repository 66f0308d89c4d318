"""Scenario catalog and run configuration for the command-line front end.

A config is a JSON object with a versioned schema:

    {
      "schema_version": 1,
      "scenario": "friction",
      "params": {"f": 1.0, "A": 2.0, "omega": 1.0},
      "x0": [1.5707963267948966, 0.0],
      "t0": 0.0,
      "t_end": 1.0,
      "step": 0.01,
      "law": "filippov",
      "seed": 0,
      "tolerances": {"event_tol": 1e-10, "sliding_tol": 1e-7}
    }

``t0``, ``law``, ``seed``, and ``tolerances`` are optional.  The canonical
dict emitted by ``config_dict`` round-trips through ``parse_config``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .fields import PiecewiseField
from .geometry import flat_surface, tilt_surface
from .integrator import IntegratorOptions
from .laws import resolve_law


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


SCHEMA_VERSION = 1

_CONFIG_KEYS = {"schema_version", "scenario", "params", "x0", "t0", "t_end",
                "step", "law", "seed", "tolerances"}
_TOLERANCE_KEYS = {"event_tol", "sliding_tol", "max_events"}


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    params: dict
    x0: tuple
    t_end: float
    step: float
    law: str = "filippov"
    t0: float = 0.0
    seed: int = 0
    tolerances: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# scenario builders


def scenario_friction(params: dict) -> PiecewiseField:
    """Dry-friction oscillator on the line, autonomized over the phase.

    State (theta, v): theta advances at unit rate, and the velocity obeys
    ``v' = A cos(omega theta) - f`` above the surface {v = 0} and
    ``v' = A cos(omega theta) + f`` below it (kinetic friction of magnitude
    f opposing the motion).  Both sides are continuous extensions; no sign
    function is ever evaluated.
    """
    f = float(params["f"])
    amp = float(params["A"])
    omega = float(params["omega"])
    if f <= 0.0:
        raise ConfigError(f"friction coefficient f must be positive, got {f}")

    def lower(x):
        return np.array([1.0, amp * np.cos(omega * x[0]) + f])

    def upper(x):
        return np.array([1.0, amp * np.cos(omega * x[0]) - f])

    return PiecewiseField(flat_surface(2), lower, upper)


def scenario_constant_tilt(params: dict) -> PiecewiseField:
    """Constant fields on both sides of the line ``x2 = slope * x1``."""
    slope = float(params["slope"])
    lo = np.array([float(params["lower1"]), float(params["lower2"])])
    up = np.array([float(params["upper1"]), float(params["upper2"])])
    surface = flat_surface(2) if slope == 0.0 else tilt_surface([slope])
    return PiecewiseField(surface, lambda x: lo.copy(), lambda x: up.copy())


SCENARIOS = {
    "friction": (scenario_friction, ("theta", "v"), ("f", "A", "omega")),
    "constant_tilt": (scenario_constant_tilt, ("x1", "x2"),
                      ("slope", "lower1", "lower2", "upper1", "upper2")),
}


def build_scenario(cfg: ScenarioConfig) -> tuple[PiecewiseField, tuple]:
    """Instantiate the configured scenario; returns the field pair and the
    coordinate labels used in output files."""
    builder, labels, _ = SCENARIOS[cfg.scenario]
    pf = builder(cfg.params)
    if len(cfg.x0) != pf.surface.dim:
        raise ConfigError(f"x0 must have length {pf.surface.dim}, got {len(cfg.x0)}")
    return pf, labels


# ---------------------------------------------------------------------------
# parsing and canonical form


def _require_number(data: dict, key: str, default=None) -> float:
    if key not in data:
        if default is None:
            raise ConfigError(f"missing config key {key!r}")
        return float(default)
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"config key {key!r} must be a number, got {v!r}")
    return float(v)


def parse_config(data: dict) -> ScenarioConfig:
    """Validate a config mapping and freeze it into a ``ScenarioConfig``."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}")

    scenario = data.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; "
                          f"catalog: {', '.join(sorted(SCENARIOS))}")
    _, _, required = SCENARIOS[scenario]
    params = data.get("params")
    if not isinstance(params, dict):
        raise ConfigError("config key 'params' must be an object")
    missing = [k for k in required if k not in params]
    if missing:
        raise ConfigError(f"scenario {scenario!r} needs params {missing}")
    extra = set(params) - set(required)
    if extra:
        raise ConfigError(f"scenario {scenario!r} does not take params {sorted(extra)}")
    params = {k: float(params[k]) for k in required}

    x0 = data.get("x0")
    if not isinstance(x0, (list, tuple)) or not x0:
        raise ConfigError("config key 'x0' must be a non-empty array")
    x0 = tuple(float(v) for v in x0)
    if not np.all(np.isfinite(x0)):
        raise ConfigError("x0 must be finite")

    t0 = _require_number(data, "t0", 0.0)
    t_end = _require_number(data, "t_end")
    step = _require_number(data, "step")
    if step <= 0.0 or not np.isfinite(step):
        raise ConfigError(f"step must be positive, got {step}")
    if not np.isfinite(t_end) or t_end < t0:
        raise ConfigError(f"t_end must satisfy t_end >= t0, got {t_end} < {t0}")

    law = data.get("law", "filippov")
    try:
        resolve_law(law)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError(f"seed must be an integer, got {seed!r}")

    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ConfigError("config key 'tolerances' must be an object")
    bad = set(tolerances) - _TOLERANCE_KEYS
    if bad:
        raise ConfigError(f"unknown tolerance keys: {sorted(bad)}")
    tolerances = {k: (int(v) if k == "max_events" else float(v))
                  for k, v in tolerances.items()}

    return ScenarioConfig(scenario=scenario, params=params, x0=x0, t_end=t_end,
                          step=step, law=law, t0=t0, seed=seed,
                          tolerances=tolerances)


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(data)


def config_dict(cfg: ScenarioConfig) -> dict:
    """Canonical mapping for echoes and round-trips (all defaults spelled out)."""
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": cfg.scenario,
        "params": dict(cfg.params),
        "x0": list(cfg.x0),
        "t0": cfg.t0,
        "t_end": cfg.t_end,
        "step": cfg.step,
        "law": cfg.law,
        "seed": cfg.seed,
        "tolerances": dict(cfg.tolerances),
    }


def integrator_options(cfg: ScenarioConfig) -> IntegratorOptions:
    kw = dict(cfg.tolerances)
    return IntegratorOptions(step=cfg.step, t_end=cfg.t_end, **kw)
