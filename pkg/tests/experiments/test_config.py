import json
from pathlib import Path

import pytest

from src.core.exceptions import ConfigError
from src.core.system import CoalesceSystem
from src.experiments.config import DEFAULT_TOLERANCES, ExperimentConfig, load_experiment_config

EXPERIMENT_DIR = Path(__file__).parent.parent.parent / "config" / "experiments"

CLT = {
    "name": "clt",
    "kind": "clt_single",
    "replicas": 200,
    "blocks": 32,
    "times": [1.0],
    "simulation": {"window": [0, 32]},
    "functions": [{"kind": "trig", "k": 1}],
}


def test_from_dict_applies_defaults():
    cfg = ExperimentConfig.from_dict(CLT, {"grid_spacing": 0.02, "dt_fraction": 1e-3})
    assert cfg.simulation.grid_spacing == 0.02
    assert cfg.simulation.checkpoints == (1.0,)
    assert cfg.simulation.seed == cfg.seed == 0
    assert cfg.tolerance("ks_distance") == DEFAULT_TOLERANCES["ks_distance"]
    assert cfg.function(0).label == "cos(2π·1u)"


def test_dict_round_trip():
    cfg = ExperimentConfig.from_dict({**CLT, "seed": 5, "tolerances": {"ks_distance": 0.04}})
    again = ExperimentConfig.from_dict(cfg.to_dict())
    assert again.to_dict() == cfg.to_dict()
    assert again.simulation == cfg.simulation


@pytest.mark.parametrize("change", [
    {"kind": "teleport"},
    {"colour": "red"},
    {"replicas": 50},
    {"blocks": 8},
    {"times": [2.0], "simulation": {"window": [0, 32], "checkpoints": [1.0]}},
    {"tolerances": {"speed": 1.0}},
    {"simulation": {"window": [0, 32], "wind": 3}},
])
def test_invalid_experiments(change):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({**CLT, **change})


def test_smoke_mode_lifts_scale_minimums():
    cfg = ExperimentConfig.from_dict({**CLT, "replicas": 5, "blocks": 4, "smoke": True})
    assert cfg.replicas == 5


def test_simulated_kinds_need_a_simulation():
    data = {k: v for k, v in CLT.items() if k != "simulation"}
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data)


def test_seed_override_reaches_the_simulation():
    cfg = ExperimentConfig.from_dict(CLT).with_seed(99)
    assert cfg.seed == 99 and cfg.simulation.seed == 99


def test_loading_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_experiment_config(tmp_path / "none.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_experiment_config(bad)


@pytest.mark.parametrize("path", sorted(EXPERIMENT_DIR.glob("*.json")), ids=lambda p: p.stem)
def test_shipped_experiments_are_valid(path):
    cfg = CoalesceSystem().load_experiment(path)
    assert cfg.name == path.stem
    assert not cfg.smoke
    assert json.loads(json.dumps(cfg.to_dict()))["kind"] == cfg.kind
