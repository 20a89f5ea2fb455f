"""
Plot data and static renderings from saved experiment results.

Every ``*_summary.json`` under the input directory yields histogram tables
with a normal overlay, kernel curves at the experiment's times and, for
continuity runs, the refitted log-log slope. SVG renderings are optional.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from ..core.exceptions import ConfigError
from ..experiments.results import CSV_FLOAT_FORMAT, read_table
from ..kernels.context import KernelContext
from ..kernels.densities import g, g_envelope, pair_correlation, rho2
from .manifest import MANIFEST_NAME

logger = logging.getLogger(__name__)

DEFAULT_BINS = 40

# per kind: columns to histogram (exact names or a prefix ending in '*')
HISTOGRAM_COLUMNS: Dict[str, Tuple[str, ...]] = {
    "intensity": ("atoms_per_length",),
    "clt_single": ("X_n*",),
    "clt_multi_time": ("X_*",),
    "clt_multi_function": ("X_*",),
    "continuity": ("increment",),
    "double_integral": ("factorial", "tensor"),
    "web_coalescence": ("xi1_clt",),
}


@dataclass
class SavedResult:
    """A summary JSON with its per-replica table and, when present, the run manifest"""
    name: str
    kind: str
    summary: Dict[str, Any]
    replicas: pd.DataFrame
    config: Optional[Dict[str, Any]] = None
    extra: Dict[str, pd.DataFrame] = field(default_factory=dict)


def _read_csv(path: Path) -> pd.DataFrame:
    try:
        return read_table(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigError(f"cannot read results table {path}: {e}") from e


def load_results(input_dir: Union[str, Path]) -> List[SavedResult]:
    """
    Collect saved results below ``input_dir``.

    Raises:
        FileNotFoundError: the directory does not exist or holds no summaries
        ConfigError: a summary or its table cannot be parsed
    """
    input_dir = Path(input_dir)
    if not input_dir.is_dir():
        raise FileNotFoundError(f"results directory {input_dir} not found")
    summaries = sorted(input_dir.rglob("*_summary.json"))
    if not summaries:
        raise FileNotFoundError(f"no *_summary.json files under {input_dir}")

    loaded = []
    for path in summaries:
        try:
            with open(path, "r") as f:
                summary = json.load(f)
            name, kind = summary["name"], summary["kind"]
        except (OSError, json.JSONDecodeError, KeyError) as e:
            raise ConfigError(f"cannot read result summary {path}: {e}") from e

        replicas_path = path.with_name(f"{name}_replicas.csv")
        if not replicas_path.exists():
            raise ConfigError(f"summary {path} has no per-replica table {replicas_path.name}")
        replicas = _read_csv(replicas_path)

        config = None
        manifest_path = path.with_name(MANIFEST_NAME)
        if manifest_path.exists():
            with open(manifest_path, "r") as f:
                config = json.load(f).get("config")

        extra = {}
        for extra_path in path.parent.glob(f"{name}_*.csv"):
            key = extra_path.stem[len(name) + 1:]
            if key != "replicas":
                extra[key] = _read_csv(extra_path)
        loaded.append(SavedResult(name, kind, summary, replicas, config, extra))
    logger.info(f"Loaded {len(loaded)} result(s) from {input_dir}")
    return loaded


def _histogram_columns(result: SavedResult) -> List[str]:
    columns = []
    for pattern in HISTOGRAM_COLUMNS.get(result.kind, ()):
        if pattern.endswith("*"):
            columns.extend(c for c in result.replicas.columns if c.startswith(pattern[:-1]))
        elif pattern in result.replicas.columns:
            columns.append(pattern)
    return columns


def _predicted_normal(result: SavedResult, column: str, position: int) -> Optional[Tuple[float, float]]:
    """(mean, variance) of the predicted limit law for ``column``, if there is one"""
    predicted = result.summary.get("predicted", {})
    if result.kind == "clt_single" and "sigma2" in predicted:
        return 0.0, float(predicted["sigma2"])
    if result.kind == "clt_multi_time":
        variances = [v for k, v in predicted.items() if k.startswith("sigma2[")]
        if position < len(variances):
            return 0.0, float(variances[position])
    if result.kind == "clt_multi_function" and "cov_zeta" in predicted:
        matrix = predicted["cov_zeta"]
        if position < len(matrix):
            return 0.0, float(matrix[position][position])
    return None


def histogram_table(sample: np.ndarray, bins: int, mean: float, variance: float) -> pd.DataFrame:
    """
    Histogram with bin masses summing to one and the N(mean, variance)
    density at the bin centres.
    """
    sample = np.asarray(sample, dtype=float)
    sample = sample[np.isfinite(sample)]
    counts, edges = np.histogram(sample, bins=bins)
    total = counts.sum()
    mass = counts / total if total else np.zeros_like(counts, dtype=float)
    widths = np.diff(edges)
    centres = 0.5 * (edges[:-1] + edges[1:])
    if variance > 0:
        overlay = stats.norm.pdf(centres, loc=mean, scale=math.sqrt(variance))
    else:
        overlay = np.zeros_like(centres)
    return pd.DataFrame({
        "bin_left": edges[:-1],
        "bin_right": edges[1:],
        "bin_center": centres,
        "count": counts,
        "mass": mass,
        "density": np.divide(mass, widths, out=np.zeros_like(mass), where=widths > 0),
        "normal_density": overlay,
    })


def kernel_curves(config: Dict[str, Any], z_max: float = 4.0, points: int = 201) -> pd.DataFrame:
    """rho2(0, z), the pair correlation, g and its envelope at every experiment time"""
    kernel = config.get("kernel", {})
    frames = []
    z = np.linspace(0.0, z_max, points)
    for t in config.get("times", []):
        ctx = KernelContext.adaptive(float(t), float(kernel.get("abs_tol", 1e-10)),
                                     int(kernel.get("quad_points", 64)), int(kernel.get("q_nodes", 200)))
        frames.append(pd.DataFrame({
            "t": float(t), "z": z,
            "rho2": rho2(ctx, 0.0, z),
            "pair_correlation": pair_correlation(ctx, z),
            "g": g(ctx, z),
            "g_envelope": g_envelope(ctx, z),
        }))
    return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()


def slope_fit(replicas: pd.DataFrame) -> Tuple[pd.DataFrame, Dict[str, float]]:
    """Least-squares line through log E|ΔX|⁴ against log gap"""
    moments = (replicas.assign(fourth=replicas["increment"] ** 4)
               .groupby("gap", sort=True)["fourth"].mean())
    moments = moments[(moments.index > 0) & (moments > 0)]
    if len(moments) < 2:
        raise ConfigError("continuity results need two positive gaps to fit a slope")
    fit = stats.linregress(np.log(moments.index.to_numpy()), np.log(moments.to_numpy()))
    table = pd.DataFrame({
        "gap": moments.index.to_numpy(),
        "fourth_moment": moments.to_numpy(),
        "fitted": np.exp(fit.intercept + fit.slope * np.log(moments.index.to_numpy())),
    })
    return table, {"slope": fit.slope, "intercept": fit.intercept, "std_error": fit.stderr}


class ReportBuilder:
    """Writes plot data (and optionally SVG) for saved results"""

    def __init__(self, output_dir: Union[str, Path], bins: int = DEFAULT_BINS, svg: bool = False):
        self.output_dir = Path(output_dir)
        self.bins = bins
        self.svg = svg
        self.logger = logging.getLogger(__name__)

    def _write(self, frame: pd.DataFrame, filename: str, written: List[str]):
        path = self.output_dir / filename
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        written.append(str(path))
        return path

    def build(self, results: List[SavedResult]) -> List[str]:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        written: List[str] = []
        index: Dict[str, Any] = {}
        for result in results:
            index[result.name] = self._build_one(result, written)
        index_path = self.output_dir / "report_index.json"
        with open(index_path, "w") as f:
            json.dump(index, f, indent=2, sort_keys=True)
        written.append(str(index_path))
        self.logger.info(f"Report written to {self.output_dir} ({len(written)} files)")
        return written

    def _build_one(self, result: SavedResult, written: List[str]) -> Dict[str, Any]:
        entry: Dict[str, Any] = {"kind": result.kind, "histograms": {}}

        for position, column in enumerate(_histogram_columns(result)):
            sample = result.replicas[column].to_numpy(dtype=float)
            normal = _predicted_normal(result, column, position)
            source = "predicted"
            if normal is None:
                normal = (float(np.mean(sample)), float(np.var(sample, ddof=1)) if sample.size > 1 else 0.0)
                source = "fitted"
            table = histogram_table(sample, self.bins, *normal)
            path = self._write(table, f"{result.name}_hist_{column}.csv", written)
            entry["histograms"][column] = {"path": str(path), "overlay": source,
                                           "mean": normal[0], "variance": normal[1]}
            if self.svg:
                written.append(self._render_histogram(table, result.name, column))

        if result.config and result.config.get("times"):
            curves = kernel_curves(result.config)
            entry["kernel_curves"] = str(self._write(curves, f"{result.name}_kernel_curves.csv", written))
            if self.svg:
                written.append(self._render_curves(curves, result.name))

        if result.kind == "continuity":
            table, fit = slope_fit(result.replicas)
            entry["slope_fit"] = {"path": str(self._write(table, f"{result.name}_slope.csv", written)), **fit}
            if self.svg:
                written.append(self._render_slope(table, fit, result.name))

        if result.kind == "pair_density" and "curve" in result.extra and self.svg:
            written.append(self._render_pair_density(result.extra["curve"], result.name))
        return entry

    # -- renderings ---------------------------------------------------------

    def _figure(self):
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        return plt

    def _save(self, plt, fig, filename: str) -> str:
        path = self.output_dir / filename
        fig.tight_layout()
        fig.savefig(path, format="svg")
        plt.close(fig)
        return str(path)

    def _render_histogram(self, table: pd.DataFrame, name: str, column: str) -> str:
        plt = self._figure()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.bar(table["bin_center"], table["density"], width=table["bin_right"] - table["bin_left"],
               alpha=0.5, label="replicas")
        ax.plot(table["bin_center"], table["normal_density"], color="black", label="normal")
        ax.set_xlabel(column)
        ax.set_ylabel("density")
        ax.legend()
        return self._save(plt, fig, f"{name}_hist_{column}.svg")

    def _render_curves(self, curves: pd.DataFrame, name: str) -> str:
        plt = self._figure()
        fig, ax = plt.subplots(figsize=(6, 4))
        for t, rows in curves.groupby("t"):
            ax.plot(rows["z"], rows["rho2"], label=f"rho2, t={t:g}")
        ax.set_xlabel("z")
        ax.legend()
        return self._save(plt, fig, f"{name}_kernel_curves.svg")

    def _render_slope(self, table: pd.DataFrame, fit: Dict[str, float], name: str) -> str:
        plt = self._figure()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.loglog(table["gap"], table["fourth_moment"], "o", label="E|ΔX|⁴")
        ax.loglog(table["gap"], table["fitted"], "-", label=f"slope {fit['slope']:.2f}")
        ax.set_xlabel("|t - s|")
        ax.legend()
        return self._save(plt, fig, f"{name}_slope.svg")

    def _render_pair_density(self, curve: pd.DataFrame, name: str) -> str:
        plt = self._figure()
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(curve["z"], curve["empirical"], "o", label="empirical")
        ax.plot(curve["z"], curve["predicted"], "-", label="rho2")
        ax.set_xlabel("z")
        ax.legend()
        return self._save(plt, fig, f"{name}_pair_density.svg")
