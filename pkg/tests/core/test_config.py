import logging

import pytest
import yaml

from src.core.config import SystemConfig
from src.core.system import CoalesceSystem
from src.core.exceptions import ConfigError
from src.experiments import limits
from src.experiments.config import ExperimentConfig
from src.experiments.runner import ExperimentRunner


def test_missing_file_gives_defaults(tmp_path):
    config = SystemConfig.load_from_file(str(tmp_path / "absent.yaml"))
    assert config.kernels.abs_tol == 1e-10
    assert config.runtime.threads == 1


def test_yaml_round_trip(tmp_path):
    path = tmp_path / "system.yaml"
    config = SystemConfig()
    config.runtime.threads = 3
    config.simulation.coalescence_mode = "order-merge"
    config.save_to_file(str(path))
    loaded = SystemConfig.load_from_file(str(path))
    assert loaded.to_dict() == config.to_dict()
    assert yaml.safe_load(path.read_text())["runtime"]["threads"] == 3


def test_thread_precedence(monkeypatch, no_threads_env):
    config = SystemConfig()
    config.runtime.threads = 2
    assert config.resolve_threads() == 2
    assert config.resolve_threads(5) == 5
    monkeypatch.setenv("COALESCE_THREADS", "7")
    assert config.resolve_threads(5) == 7
    monkeypatch.setenv("COALESCE_THREADS", "many")
    assert config.resolve_threads(5) == 5


def test_experiment_threads_sit_between_cli_and_yaml(no_threads_env):
    cfg = ExperimentConfig(name="ids", kind="identities", threads=4)
    assert CoalesceSystem().threads_for(cfg) == 4
    assert CoalesceSystem(threads=6).threads_for(cfg) == 6
    assert CoalesceSystem().threads_for() == 1


def test_system_fills_kernel_defaults(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text('{"kind": "identities", "replicas": 3, "kernel": {"quad_points": 32}}')
    cfg = CoalesceSystem().load_experiment(path)
    assert cfg.kernel == {"abs_tol": 1e-10, "quad_points": 32, "q_nodes": 200,
                          "residual_tol": 1e-6, "eigen_floor_tol": 1e-8}
    assert cfg.kernel_context(2.0).quad_points == 32


def _write_yaml(tmp_path, **sections):
    path = tmp_path / "system.yaml"
    path.write_text(yaml.safe_dump(sections))
    return str(path)


def test_yaml_tolerances_reach_the_experiment(tmp_path):
    system = CoalesceSystem(_write_yaml(tmp_path, kernels={"residual_tol": 1e-4, "eigen_floor_tol": 1e-6}))
    exp = tmp_path / "exp.json"
    exp.write_text('{"kind": "identities", "replicas": 3}')
    cfg = system.load_experiment(exp)
    assert cfg.residual_tol == 1e-4
    assert cfg.eigen_floor_tol == 1e-6

    exp.write_text('{"kind": "identities", "replicas": 3, "params": {"residual_tol": 1e-3}}')
    assert system.load_experiment(exp).residual_tol == 1e-3


def test_unknown_kernel_keys_are_rejected():
    with pytest.raises(ConfigError, match="kernel keys"):
        ExperimentConfig(name="ids", kind="identities", kernel={"abs_tolerance": 1e-9})


class _Stop(Exception):
    pass


def test_limit_experiments_use_the_configured_tolerances(monkeypatch):
    seen = {}

    def fake_covariance(t, basis, ctx=None, floor_tol=None, **kwargs):
        seen["floor_tol"] = floor_tol
        return None

    def fake_prepare(f2, basis, ctx, residual_tol):
        seen["residual_tol"] = residual_tol
        raise _Stop

    monkeypatch.setattr(limits, "build_covariance", fake_covariance)
    monkeypatch.setattr(limits, "prepare_limit_functional_k2", fake_prepare)
    cfg = ExperimentConfig.from_dict({
        "kind": "basis_independence", "smoke": True, "replicas": 10,
        "function2": {"x": {"kind": "trig", "k": 1}},
        "kernel": {"residual_tol": 2e-5, "eigen_floor_tol": 3e-7},
    })
    with pytest.raises(_Stop):
        ExperimentRunner(progress=False).run(cfg)
    assert seen == {"floor_tol": 3e-7, "residual_tol": 2e-5}


def test_log_level_comes_from_yaml(tmp_path):
    assert CoalesceSystem(_write_yaml(tmp_path, runtime={"log_level": "warning"})).log_level() == logging.WARNING
    assert CoalesceSystem(_write_yaml(tmp_path, runtime={"log_level": "WARNING"})).log_level(verbose=True) == logging.DEBUG
    assert CoalesceSystem(_write_yaml(tmp_path, runtime={"log_level": "chatty"})).log_level() == logging.INFO
