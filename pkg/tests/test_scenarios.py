import json

import numpy as np
import pytest

from slidefield.integrator import IntegratorOptions
from slidefield.scenarios import (
    SCENARIOS,
    SCHEMA_VERSION,
    ConfigError,
    ScenarioConfig,
    build_scenario,
    config_dict,
    integrator_options,
    load_config,
    parse_config,
    scenario_constant_tilt,
    scenario_friction,
)

BASE = {
    "schema_version": 1,
    "scenario": "friction",
    "params": {"f": 1.0, "A": 2.0, "omega": 1.0},
    "x0": [1.5707963267948966, 0.0],
    "t_end": 1.0,
    "step": 0.01,
}


def cfg_with(**overrides):
    data = json.loads(json.dumps(BASE))
    data.update(overrides)
    return data


def test_parse_minimal_config_fills_defaults():
    cfg = parse_config(cfg_with())
    assert cfg.scenario == "friction"
    assert cfg.law == "filippov"
    assert cfg.t0 == 0.0
    assert cfg.seed == 0
    assert cfg.tolerances == {}
    assert cfg.x0 == (1.5707963267948966, 0.0)


def test_config_dict_round_trips():
    cfg = parse_config(cfg_with(law="mean", seed=7, t0=0.5, t_end=2.0,
                                tolerances={"event_tol": 1e-9, "max_events": 50}))
    assert parse_config(config_dict(cfg)) == cfg


def test_schema_version_default_and_mismatch():
    data = cfg_with()
    del data["schema_version"]
    assert parse_config(data).scenario == "friction"
    with pytest.raises(ConfigError, match="schema_version"):
        parse_config(cfg_with(schema_version=2))


@pytest.mark.parametrize("mutation, pattern", [
    ({"bogus": 1}, "unknown config keys"),
    ({"scenario": "pendulum"}, "unknown scenario"),
    ({"params": {"f": 1.0}}, "needs params"),
    ({"params": {"f": 1.0, "A": 2.0, "omega": 1.0, "mu": 3.0}}, "does not take"),
    ({"params": [1, 2, 3]}, "must be an object"),
    ({"x0": []}, "non-empty"),
    ({"x0": "origin"}, "non-empty"),
    ({"x0": [0.0, float("nan")]}, "finite"),
    ({"step": 0.0}, "step must be positive"),
    ({"step": -0.1}, "step must be positive"),
    ({"t_end": -1.0}, "t_end"),
    ({"t_end": "soon"}, "must be a number"),
    ({"law": "bogus"}, "unknown law"),
    ({"seed": 1.5}, "seed must be an integer"),
    ({"seed": True}, "seed must be an integer"),
    ({"tolerances": {"foo": 1.0}}, "unknown tolerance keys"),
    ({"tolerances": 3}, "must be an object"),
])
def test_parse_config_rejections(mutation, pattern):
    with pytest.raises(ConfigError, match=pattern):
        parse_config(cfg_with(**mutation))


def test_missing_required_keys():
    for key in ("scenario", "x0", "t_end", "step"):
        data = cfg_with()
        del data[key]
        with pytest.raises(ConfigError):
            parse_config(data)


def test_zero_duration_config_is_allowed():
    cfg = parse_config(cfg_with(t0=1.0, t_end=1.0))
    assert cfg.t0 == cfg.t_end == 1.0


def test_config_error_is_a_value_error():
    assert issubclass(ConfigError, ValueError)


# --- scenario builders --------------------------------------------------------


def test_friction_field_values():
    pf = scenario_friction({"f": 1.0, "A": 2.0, "omega": 1.0})
    x = np.array([0.0, 0.0])
    assert np.allclose(pf.lower(x), [1.0, 3.0])
    assert np.allclose(pf.upper(x), [1.0, 1.0])
    x = np.array([np.pi, 0.0])
    assert np.allclose(pf.lower(x), [1.0, -1.0])
    assert np.allclose(pf.upper(x), [1.0, -3.0])


def test_friction_rejects_nonpositive_coefficient():
    with pytest.raises(ConfigError, match="must be positive"):
        scenario_friction({"f": 0.0, "A": 2.0, "omega": 1.0})


def test_constant_tilt_field():
    pf = scenario_constant_tilt({"slope": 1.0, "lower1": 1.0, "lower2": 2.0,
                                 "upper1": 1.0, "upper2": 0.0})
    assert pf.surface.name == "tilt"
    assert np.allclose(pf.lower(np.zeros(2)), [1.0, 2.0])
    flat = scenario_constant_tilt({"slope": 0.0, "lower1": 0.0, "lower2": 1.0,
                                   "upper1": 0.0, "upper2": -1.0})
    assert flat.surface.name == "flat"


def test_build_scenario_returns_labels():
    cfg = parse_config(cfg_with())
    pf, labels = build_scenario(cfg)
    assert labels == ("theta", "v")
    assert pf.surface.dim == 2


def test_build_scenario_checks_state_length():
    cfg = parse_config(cfg_with(x0=[0.1]))
    with pytest.raises(ConfigError, match="length 2"):
        build_scenario(cfg)


def test_scenario_catalog_shape():
    for name, (builder, labels, required) in SCENARIOS.items():
        assert callable(builder)
        assert len(labels) >= 2
        assert required


def test_integrator_options_from_config():
    cfg = parse_config(cfg_with(tolerances={"event_tol": 1e-9, "sliding_tol": 1e-6,
                                            "max_events": 5}))
    opts = integrator_options(cfg)
    assert isinstance(opts, IntegratorOptions)
    assert opts.step == 0.01 and opts.t_end == 1.0
    assert opts.event_tol == 1e-9 and opts.sliding_tol == 1e-6
    assert opts.max_events == 5


def test_load_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg_with()), encoding="utf-8")
    assert load_config(path).scenario == "friction"
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(bad)


def test_schema_version_constant():
    assert SCHEMA_VERSION == 1
    assert config_dict(parse_config(cfg_with()))["schema_version"] == 1
