import json

import pytest

from config_schemas import TOLERANCE_DEFAULTS
from errors import ConfigError
from run_config import build_run_config, load_run_config, parse_overrides


def _path_of(raw: dict, **kwargs) -> str:
    with pytest.raises(ConfigError) as info:
        build_run_config(raw, **kwargs)
    return info.value.path


def test_defaults_are_merged():
    cfg = build_run_config({"command": "integrals"})
    assert cfg.seed == 0
    assert cfg.alpha == 1.0
    assert cfg.grids["x_grid"] == {"lo": 1e-3, "hi": 1e3, "n": 12}
    assert cfg.grids["simulator"]["n"] == 4096
    assert cfg.tolerances == TOLERANCE_DEFAULTS


def test_partial_grid_override_keeps_siblings():
    cfg = build_run_config({"command": "simulate", "symbol": {"name": "i_sgn"},
                            "grids": {"simulator": {"trials": 10}}})
    assert cfg.grids["simulator"]["trials"] == 10
    assert cfg.grids["simulator"]["x_max"] == 64.0
    assert cfg.grids["positivity_grid"]["n"] == 64


@pytest.mark.parametrize(
    ("raw", "path"),
    [
        ({}, "command"),
        ({"command": "plot"}, "command"),
        ({"command": "pick"}, "measure"),
        ({"command": "example-t"}, "t"),
        ({"command": "example-t", "t": 1.5}, "t"),
        ({"command": "gram"}, "measure"),
        ({"command": "classify", "symbol": {"name": "i_sgn"}}, "projection"),
        ({"command": "symbol", "symbol": {"name": "beta"}}, "measure"),
        ({"command": "integrals", "grids": {"simulator": {"n": 1}}}, "grids.simulator.n"),
        ({"command": "integrals", "tolerances": {"gram": -1.0}}, "tolerances.gram"),
        ({"command": "integrals", "tolerances": {"gram": 0.0}}, "tolerances.gram"),
        ({"command": "integrals", "grids": {"x_grid": {"lo": 2.0, "hi": 1.0, "n": 4}}}, "grids.x_grid"),
        ({"command": "integrals", "colour": "blue"}, "colour"),
    ],
)
def test_validation_errors_name_the_field(raw, path):
    assert _path_of(raw) == path


def test_beta_needs_projection():
    raw = {"command": "symbol", "symbol": {"name": "beta"}, "measure": {"dim": 1, "density": {"name": "lebesgue2"}}}
    assert _path_of(raw) == "projection"


def test_bad_measure_is_a_config_error():
    raw = {"command": "pick", "measure": {"dim": 1, "density": {"name": "nope"}}}
    assert _path_of(raw) == "measure"


def test_seed_and_overrides():
    cfg = build_run_config({"command": "integrals", "seed": 3, "tolerances": {"verify": 1e-5}},
                           seed=11, tol_overrides={"verify": 1e-4}, base_tolerances={"rel_tol": 1e-9})
    assert cfg.seed == 11
    assert cfg.tol("verify") == 1e-4
    assert cfg.tol("rel_tol") == 1e-9
    assert cfg.echo()["seed"] == 11


def test_parse_overrides():
    assert parse_overrides(["gram=1e-6", " witness = 2e-9"]) == {"gram": 1e-6, "witness": 2e-9}
    assert parse_overrides(None) == {}
    with pytest.raises(ConfigError):
        parse_overrides(["gram"])
    with pytest.raises(ConfigError):
        parse_overrides(["speed=1"])
    with pytest.raises(ConfigError):
        parse_overrides(["gram=small"])


def test_load_yaml_and_json(tmp_path):
    yaml_file = tmp_path / "run.yaml"
    yaml_file.write_text("command: example-t\nt: 0.5\n", encoding="utf-8")
    json_file = tmp_path / "run.json"
    json_file.write_text(json.dumps({"command": "example-t", "t": 1.0}), encoding="utf-8")
    assert load_run_config(yaml_file).t == 0.5
    assert load_run_config(json_file).t == 1.0


def test_load_rejects_non_mapping_and_missing(tmp_path):
    bad = tmp_path / "run.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_run_config(bad)
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.yaml")


def test_measure_and_matrices_are_parsed():
    cfg = build_run_config({
        "command": "classify",
        "symbol": {"name": "example_beta_closed", "params": [0.5]},
        "projection": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
        "measure": {"dim": 4, "density": {"name": "example_t", "params": [0.5]}},
    })
    assert cfg.measure.dim == 4
    assert cfg.projection.shape == (4, 4)
    assert cfg.echo()["measure"]["density"] == {"name": "example_t", "params": [0.5]}
