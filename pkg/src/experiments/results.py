"""
Experiment results and the shared summary statistics
"""

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from scipy import stats

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    """Read a table written with CSV_FLOAT_FORMAT; floats come back bit-exact"""
    return pd.read_csv(path, float_precision="round_trip")


def summarize(sample, predicted_variance: Optional[float] = None, predicted_mean: float = 0.0) -> Dict[str, float]:
    """
    Moments, standard errors and a KS distance for one scalar sample.

    The KS distance is taken against N(predicted_mean, predicted_variance)
    when a prediction is given, otherwise against the fitted normal.
    Degenerate samples report zero skewness, kurtosis and KS distance when the
    prediction is degenerate too.
    """
    x = np.asarray(sample, dtype=float)
    n = x.size
    if n == 0:
        return {"count": 0}
    mean = float(x.mean())
    var = float(x.var(ddof=1)) if n > 1 else 0.0
    degenerate = var <= 0.0
    skew = 0.0 if degenerate else float(stats.skew(x))
    exkurt = 0.0 if degenerate else float(stats.kurtosis(x))
    # Var of the sample variance through the fourth central moment
    m4 = float(np.mean((x - mean) ** 4))
    var_se = math.sqrt(max(m4 - var * var * (n - 3) / max(n - 1, 1), 0.0) / n) if n > 1 else 0.0

    if predicted_variance is not None:
        loc, scale = predicted_mean, math.sqrt(max(predicted_variance, 0.0))
    else:
        loc, scale = mean, math.sqrt(var)
    if scale > 0.0:
        ks = float(stats.kstest(x, "norm", args=(loc, scale)).statistic)
    else:
        ks = 0.0 if np.all(x == loc) else 1.0

    return {
        "count": int(n),
        "mean": mean,
        "variance": var,
        "skewness": skew,
        "excess_kurtosis": exkurt,
        "mean_std_error": math.sqrt(var / n),
        "variance_std_error": var_se,
        "ks_distance": ks,
    }


def two_sample_ks(a, b) -> float:
    return float(stats.ks_2samp(np.asarray(a, dtype=float), np.asarray(b, dtype=float)).statistic)


@dataclass
class Check:
    """One tolerance decision. Informational checks are reported but never fail the run"""
    name: str
    observed: float
    expected: Optional[float]
    tolerance: Optional[float]
    passed: bool
    enforced: bool = True
    note: str = ""

    @classmethod
    def relative(cls, name: str, observed: float, expected: float, tol: float, **kw) -> 'Check':
        err = abs(observed - expected) / abs(expected) if expected != 0 else abs(observed)
        return cls(name, observed, expected, tol, bool(err <= tol), **kw)

    @classmethod
    def absolute(cls, name: str, observed: float, expected: float, tol: float, **kw) -> 'Check':
        return cls(name, observed, expected, tol, bool(abs(observed - expected) <= tol), **kw)

    @classmethod
    def at_most(cls, name: str, observed: float, bound: float, **kw) -> 'Check':
        return cls(name, observed, bound, None, bool(observed <= bound), **kw)

    @classmethod
    def at_least(cls, name: str, observed: float, bound: float, **kw) -> 'Check':
        return cls(name, observed, bound, None, bool(observed >= bound), **kw)

    @classmethod
    def within_errors(cls, name: str, observed: float, expected: float, std_error: float,
                      count: float, **kw) -> 'Check':
        ok = abs(observed - expected) <= count * std_error or observed == expected
        return cls(name, observed, expected, count * std_error, bool(ok), **kw)


@dataclass
class ExperimentResult:
    """
    Outcome of one experiment.

    ``table`` holds the raw per-replica statistics; ``summary`` is computed from
    it. ``predicted`` holds analytic values from the kernels.
    """
    name: str
    kind: str
    table: pd.DataFrame
    summary: Dict[str, Any] = field(default_factory=dict)
    predicted: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    runtime: Dict[str, Any] = field(default_factory=dict)
    extra_tables: Dict[str, pd.DataFrame] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.enforced)

    @property
    def failed_checks(self) -> List[Check]:
        return [c for c in self.checks if c.enforced and not c.passed]

    def to_frame(self) -> pd.DataFrame:
        return self.table

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "kind": self.kind,
            "passed": self.passed,
            "summary": _jsonable(self.summary),
            "predicted": _jsonable(self.predicted),
            "checks": [_jsonable(asdict(c)) for c in self.checks],
            "runtime": _jsonable(self.runtime),
            "replica_rows": int(len(self.table)),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def save(self, output_dir: Union[str, Path]) -> Dict[str, str]:
        """Write the per-replica CSV(s) and the summary JSON; returns the written paths"""
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        paths = {}

        replicas_path = output_dir / f"{self.name}_replicas.csv"
        self.table.to_csv(replicas_path, index=False, float_format=CSV_FLOAT_FORMAT)
        paths["replicas"] = str(replicas_path)
        for key, frame in self.extra_tables.items():
            extra_path = output_dir / f"{self.name}_{key}.csv"
            frame.to_csv(extra_path, index=False, float_format=CSV_FLOAT_FORMAT)
            paths[key] = str(extra_path)

        summary_path = output_dir / f"{self.name}_summary.json"
        with open(summary_path, "w") as f:
            f.write(self.to_json())
        paths["summary"] = str(summary_path)

        logger.info(f"Results for {self.name} saved to {output_dir}")
        return paths


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value
