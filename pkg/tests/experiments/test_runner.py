import json
import math
import threading

import numpy as np
import pytest

from src.core.exceptions import ConfigError
from src.experiments import EXPERIMENT_KINDS, ExperimentConfig, ExperimentRunner, ReplicaPool
from src.experiments.web import WebExperiments


def test_pool_returns_replicas_in_order():
    def work(i):
        rng = np.random.default_rng(i)
        return float(rng.random()), threading.get_ident()

    serial = [v for v, _ in ReplicaPool(1, progress=False).map(work, 24)]
    threaded = [v for v, _ in ReplicaPool(4, progress=False).map(work, 24)]
    assert serial == threaded


def test_runner_covers_every_kind():
    assert set(ExperimentRunner(progress=False).kinds) == set(EXPERIMENT_KINDS)


def test_identities_hold(no_threads_env):
    cfg = ExperimentConfig(name="ids", kind="identities", replicas=6, seed=3)
    result = ExperimentRunner(progress=False).run(cfg)
    assert result.passed, [c.name for c in result.failed_checks]
    assert len(result.table) == 6
    assert result.summary["order3_tensor_coefficients"] == [1, 3, 1]


def test_identities_are_thread_independent():
    cfg = ExperimentConfig(name="ids", kind="identities", replicas=4, seed=8)
    serial = ExperimentRunner(threads=1, progress=False).run(cfg).table
    threaded = ExperimentRunner(threads=3, progress=False).run(cfg).table
    assert serial.equals(threaded)


def _smoke(kind, **overrides):
    data = {
        "kind": kind,
        "smoke": True,
        "seed": 21,
        "replicas": 4,
        "blocks": 4,
        "times": [1.0],
        "simulation": {"window": [0, 8], "grid_spacing": 0.05, "dt": 0.01},
        "functions": [{"kind": "trig", "k": 1}],
    }
    data.update(overrides)
    return ExperimentConfig.from_dict(data)


SMOKE_CONFIGS = {
    "intensity": dict(functions=[{"kind": "constant", "value": 1.0}], params={"dt_refinement": 2}),
    "pair_density": dict(params={"z_values": [0.5, 1.0], "bin_half_width": 0.05}),
    "clt_single": dict(params={"blocks_list": [2]}),
    "clt_multi_time": dict(times=[0.5, 1.0], simulation={"window": [0, 8], "grid_spacing": 0.025, "dt": 0.005}),
    "clt_multi_function": dict(functions=[{"kind": "trig", "k": 1}, {"kind": "trig", "k": 2, "phase": "sin"}]),
    "mixing": dict(functions=[{"kind": "constant", "value": 1.0}], params={"gaps": [0, 1, 2]}),
    "continuity": dict(times=[1.0, 1.05, 1.1, 1.2]),
    "double_integral": dict(function2={"x": {"kind": "trig", "k": 1}},
                            params={"basis_size": 8, "limit_draws": 200}),
    "basis_independence": dict(function2={"x": {"kind": "trig", "k": 1}},
                               params={"basis_size": 64, "draws": 200}),
    "web_coalescence": dict(times=[1.0, 2.0], blocks=8, params={"positions": [4.0]}),
    "xi_stationarity": dict(times=[1.0, 2.0], params={"positions": [3.0, 5.0], "orders": [1, 2]}),
}


@pytest.mark.slow
@pytest.mark.parametrize("kind", sorted(SMOKE_CONFIGS))
def test_smoke_runs(kind, tmp_path):
    cfg = _smoke(kind, **SMOKE_CONFIGS[kind])
    result = ExperimentRunner(progress=False).run(cfg)
    assert result.kind == kind
    assert result.checks
    assert len(result.table) > 0
    paths = result.save(tmp_path)
    assert json.loads(open(paths["summary"]).read())["name"] == kind


def test_seed_override_changes_the_realizations():
    cfg = _smoke("clt_single")
    runner = ExperimentRunner(progress=False)
    first = runner.run(cfg)
    again = runner.run(cfg)
    other = runner.run(cfg, seed=22)
    assert first.table.equals(again.table)
    assert not first.table.equals(other.table)
    assert other.runtime["seed"] == 22


def test_missing_function_is_a_config_error():
    with pytest.raises(ConfigError):
        ExperimentRunner(progress=False).run(_smoke("double_integral"))


def _checks_named(result, prefix):
    return [c for c in result.checks if c.name.startswith(prefix)]


@pytest.mark.slow
def test_simulated_intensity_matches_rho1():
    cfg = _smoke("intensity", replicas=300, times=[0.25],
                 simulation={"window": [0, 64], "grid_spacing": 0.025, "dt": 0.0025},
                 functions=[{"kind": "constant", "value": 1.0}])
    result = ExperimentRunner(progress=False).run(cfg)
    (check,) = _checks_named(result, "intensity t=0.25")
    assert check.expected == pytest.approx(1.0 / np.sqrt(np.pi * 0.25))
    assert check.tolerance == 0.03
    assert check.passed, (check.observed, check.expected)


@pytest.mark.slow
def test_simulated_pair_density_matches_rho2():
    cfg = _smoke("pair_density", replicas=400, times=[0.25],
                 simulation={"window": [0, 64], "grid_spacing": 0.025, "dt": 0.0025},
                 params={"z_values": [1.0, 2.0], "bin_half_width": 0.1})
    result = ExperimentRunner(progress=False).run(cfg)
    checks = _checks_named(result, "pair density")
    assert len(checks) == 2
    for check in checks:
        assert check.tolerance == 0.05
        assert check.passed, (check.name, check.observed, check.expected)


def test_q_checks_integrate_the_density():
    checks = WebExperiments(ReplicaPool(1, progress=False))._q_spot_checks(1.0, 1.5, 200)
    mass_checks = [c for c in checks if c.name.startswith("q mass")]
    assert [c.name for c in mass_checks] == ["q mass d=0.2", "q mass d=1", "q mass d=1.2", "q mass d=2", "q mass d=1.5"]
    assert mass_checks[-1].expected == pytest.approx(math.erfc(1.5 / 2.0), rel=1e-12)
    assert all(c.passed for c in checks), [c.name for c in checks if not c.passed]
