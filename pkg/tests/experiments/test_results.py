import json
import math

import numpy as np
import pandas as pd
import pytest

from src.cli.report import load_results
from src.experiments.results import Check, ExperimentResult, read_table, summarize, two_sample_ks


def test_summary_of_a_normal_sample():
    x = np.random.default_rng(0).normal(1.0, 2.0, size=20_000)
    stats = summarize(x, predicted_variance=4.0, predicted_mean=1.0)
    assert stats["count"] == 20_000
    assert stats["mean"] == pytest.approx(1.0, abs=4 * stats["mean_std_error"])
    assert stats["variance"] == pytest.approx(4.0, abs=4 * stats["variance_std_error"])
    assert abs(stats["skewness"]) < 0.1
    assert abs(stats["excess_kurtosis"]) < 0.2
    assert stats["ks_distance"] < 0.02
    assert summarize(x)["ks_distance"] < 0.02


def test_degenerate_samples():
    assert summarize([])["count"] == 0
    flat = summarize([2.0, 2.0, 2.0], predicted_variance=0.0, predicted_mean=2.0)
    assert flat["variance"] == 0.0 and flat["ks_distance"] == 0.0
    assert summarize([2.0, 2.0], predicted_variance=0.0, predicted_mean=1.0)["ks_distance"] == 1.0


def test_two_sample_ks():
    rng = np.random.default_rng(1)
    assert two_sample_ks(rng.normal(size=4000), rng.normal(size=4000)) < 0.05
    assert two_sample_ks(rng.normal(size=4000), rng.normal(3.0, size=4000)) > 0.5


def test_checks():
    assert Check.relative("r", 1.04, 1.0, 0.05).passed
    assert not Check.relative("r", 1.06, 1.0, 0.05).passed
    assert Check.absolute("a", 0.01, 0.0, 0.02).passed
    assert Check.at_most("m", 1e-12, 1e-9).passed
    assert not Check.at_least("l", 1.2, 1.5).passed
    check = Check.within_errors("e", 1.2, 1.0, 0.1, 3.0)
    assert check.passed and check.tolerance == pytest.approx(0.3)
    assert Check.within_errors("e", 1.0, 1.0, 0.0, 3.0).passed


def test_informational_checks_do_not_fail_the_run():
    result = ExperimentResult("x", "intensity", pd.DataFrame({"a": [1.0]}))
    result.checks.append(Check.at_most("enforced", 0.0, 1.0))
    result.checks.append(Check.at_most("info", 2.0, 1.0, enforced=False))
    assert result.passed
    result.checks.append(Check.at_most("broken", 2.0, 1.0))
    assert not result.passed
    assert [c.name for c in result.failed_checks] == ["broken"]


def test_save_writes_csv_and_summary(tmp_path):
    table = pd.DataFrame({"replica": [0, 1], "x": [1 / 3, math.pi]})
    result = ExperimentResult("demo", "clt_single", table, summary={"x": {"mean": np.float64(1.5)}},
                              predicted={"sigma2": float("nan")})
    result.extra_tables["curve"] = pd.DataFrame({"z": [0.5], "value": [0.25]})
    paths = result.save(tmp_path)
    assert set(paths) == {"replicas", "curve", "summary"}

    saved = read_table(paths["replicas"])
    assert saved["x"].tolist() == table["x"].tolist()
    summary = json.loads((tmp_path / "demo_summary.json").read_text())
    assert summary["summary"]["x"]["mean"] == 1.5
    assert summary["predicted"]["sigma2"] is None
    assert summary["replica_rows"] == 2


def test_saved_tables_reload_bit_exact(tmp_path):
    values = np.random.default_rng(8).normal(size=50) * 1e3
    values[:3] = [math.pi, 1 / 3, 0.1 + 0.2]
    result = ExperimentResult("exact", "clt_single", pd.DataFrame({"replica": range(50), "X": values}))
    result.save(tmp_path)
    (loaded,) = load_results(tmp_path)
    assert np.array_equal(loaded.replicas["X"].to_numpy(), values)
