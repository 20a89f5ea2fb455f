"""
Experiment configuration

Experiment files are JSON; see docs/CONFIG_SCHEMA.md for the schema.
"""

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..core.exceptions import ConfigError
from ..flow.config import SimConfig
from ..kernels.context import KernelContext
from ..kernels.periodic import PeriodicFunction, SeparableFunction2

logger = logging.getLogger(__name__)

EXPERIMENT_KINDS = (
    "intensity",
    "pair_density",
    "clt_single",
    "clt_multi_time",
    "clt_multi_function",
    "mixing",
    "continuity",
    "double_integral",
    "web_coalescence",
    "xi_stationarity",
    "identities",
    "basis_independence",
)

SIMULATED_KINDS = tuple(k for k in EXPERIMENT_KINDS if k not in ("identities", "basis_independence"))
DISTRIBUTIONAL_KINDS = ("clt_single", "clt_multi_time", "clt_multi_function", "mixing",
                        "continuity", "double_integral")
CLT_KINDS = ("clt_single", "clt_multi_time", "clt_multi_function", "continuity", "double_integral")
MIN_DISTRIBUTIONAL_REPLICAS = 100
MIN_CLT_BLOCKS = 16

DEFAULT_TOLERANCES: Dict[str, float] = {
    "intensity_rel": 0.03,
    "block_variance_rel": 0.10,
    "pair_density_rel": 0.05,
    "pair_density_abs": 0.02,
    "pair_density_abs_below": 0.5,
    "variance_rel": 0.10,
    "skewness_abs": 0.15,
    "excess_kurtosis_abs": 0.3,
    "ks_distance": 0.05,
    "standard_errors": 3.0,
    "slope_min": 1.5,
    "two_sample_ks": 0.08,
    "identity_abs": 1e-9,
    "coalescence_rel": 0.05,
    "basis_variance_rel": 0.02,
    "haar_residual": 0.1,
    "xi_clt_ks": 0.08,
}

KERNEL_KEYS = ("abs_tol", "quad_points", "q_nodes", "residual_tol", "eigen_floor_tol")

_TOP_LEVEL_KEYS = {"name", "kind", "seed", "replicas", "blocks", "times", "simulation", "kernel",
                   "functions", "function2", "tolerances", "params", "smoke", "threads"}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: what to simulate, which statistic, and the tolerances it is judged by"""
    name: str
    kind: str
    seed: int = 0
    replicas: int = 100
    blocks: int = 64
    times: List[float] = field(default_factory=lambda: [1.0])
    simulation: Optional[SimConfig] = None
    kernel: Dict[str, Any] = field(default_factory=dict)
    functions: List[PeriodicFunction] = field(default_factory=list)
    function2: Optional[SeparableFunction2] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)
    smoke: bool = False
    threads: Optional[int] = None

    def __post_init__(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind '{self.kind}'; expected one of {EXPERIMENT_KINDS}")
        if self.replicas < 1:
            raise ConfigError(f"replicas must be positive, got {self.replicas}")
        if self.blocks < 1:
            raise ConfigError(f"blocks must be positive, got {self.blocks}")
        if not self.times or any(t <= 0 for t in self.times):
            raise ConfigError(f"times must be a non-empty list of positive values, got {self.times}")
        unknown = sorted(set(self.tolerances) - set(DEFAULT_TOLERANCES))
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {unknown}")
        unknown = sorted(set(self.kernel) - set(KERNEL_KEYS))
        if unknown:
            raise ConfigError(f"unknown kernel keys: {unknown}; expected some of {KERNEL_KEYS}")

        if self.smoke:
            logger.warning(f"Experiment '{self.name}' runs in smoke mode; scale minimums are not enforced")
        else:
            if self.kind in DISTRIBUTIONAL_KINDS and self.replicas < MIN_DISTRIBUTIONAL_REPLICAS:
                raise ConfigError(
                    f"{self.kind} needs R >= {MIN_DISTRIBUTIONAL_REPLICAS} replicas, got {self.replicas}"
                )
            if self.kind in CLT_KINDS and self.blocks < MIN_CLT_BLOCKS:
                raise ConfigError(f"{self.kind} needs n >= {MIN_CLT_BLOCKS} blocks, got {self.blocks}")

        if self.kind in SIMULATED_KINDS:
            if self.simulation is None:
                raise ConfigError(f"{self.kind} needs a 'simulation' section")
            missing = [t for t in self.times if t not in self.simulation.checkpoints]
            if missing:
                raise ConfigError(f"times {missing} are not simulation checkpoints {list(self.simulation.checkpoints)}")

    # -- accessors ------------------------------------------------------------

    def tolerance(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def param(self, key: str, default: Any = None) -> Any:
        return self.params.get(key, default)

    def kernel_context(self, t: float) -> KernelContext:
        """Context at time t with the series truncation adapted to t"""
        return KernelContext.adaptive(
            t,
            abs_tol=float(self.kernel.get("abs_tol", 1e-10)),
            quad_points=int(self.kernel.get("quad_points", 64)),
            q_nodes=int(self.kernel.get("q_nodes", 200)),
        )

    @property
    def residual_tol(self) -> float:
        """Expansion residual allowed on complete bases; ``params.residual_tol`` wins"""
        return float(self.param("residual_tol", self.kernel.get("residual_tol", 1e-6)))

    @property
    def eigen_floor_tol(self) -> float:
        """Most negative covariance eigenvalue floored instead of rejected"""
        return float(self.kernel.get("eigen_floor_tol", 1e-8))

    def function(self, index: int = 0) -> PeriodicFunction:
        if index >= len(self.functions):
            raise ConfigError(f"{self.name} needs at least {index + 1} function(s)")
        return self.functions[index]

    def with_seed(self, seed: int) -> 'ExperimentConfig':
        simulation = replace(self.simulation, seed=seed) if self.simulation is not None else None
        return replace(self, seed=seed, simulation=simulation)

    # -- serialisation ----------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Dict[str, Any], defaults: Optional[Dict[str, Any]] = None) -> 'ExperimentConfig':
        """
        Build from a parsed experiment file.

        Args:
            data: Parsed JSON
            defaults: Simulation defaults (dt_fraction, coalescence_mode, grid_spacing)
                applied where the file is silent
        """
        unknown = sorted(set(data) - _TOP_LEVEL_KEYS)
        if unknown:
            raise ConfigError(f"unknown experiment keys: {unknown}")
        if "kind" not in data:
            raise ConfigError("experiment file needs a 'kind'")

        seed = int(data.get("seed", 0))
        times = [float(t) for t in data.get("times", [1.0])]
        simulation = None
        if "simulation" in data:
            sim = dict(defaults or {})
            sim.update(data["simulation"])
            sim.setdefault("checkpoints", sorted(set(times)))
            sim["seed"] = seed
            simulation = SimConfig.from_dict(sim)

        function2 = None
        if "function2" in data:
            function2 = SeparableFunction2.from_spec(data["function2"])

        return cls(
            name=str(data.get("name", data["kind"])),
            kind=data["kind"],
            seed=seed,
            replicas=int(data.get("replicas", 100)),
            blocks=int(data.get("blocks", 64)),
            times=times,
            simulation=simulation,
            kernel=dict(data.get("kernel", {})),
            functions=[PeriodicFunction.from_spec(s) for s in data.get("functions", [])],
            function2=function2,
            tolerances={k: float(v) for k, v in data.get("tolerances", {}).items()},
            params=dict(data.get("params", {})),
            smoke=bool(data.get("smoke", False)),
            threads=data.get("threads"),
        )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "kind": self.kind,
            "seed": self.seed,
            "replicas": self.replicas,
            "blocks": self.blocks,
            "times": list(self.times),
            "kernel": dict(self.kernel),
            "functions": [f.to_spec() for f in self.functions],
            "tolerances": dict(self.tolerances),
            "params": dict(self.params),
            "smoke": self.smoke,
        }
        if self.simulation is not None:
            sim = self.simulation.to_dict()
            sim.pop("seed", None)
            data["simulation"] = sim
        if self.function2 is not None:
            data["function2"] = self.function2.to_spec()
        if self.threads is not None:
            data["threads"] = self.threads
        return data


def load_experiment_config(
    path: Union[str, Path],
    defaults: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """
    Read an experiment file.

    Raises:
        FileNotFoundError: the file does not exist
        ConfigError: invalid JSON or an invalid configuration
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"experiment config {path} not found")
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    config = ExperimentConfig.from_dict(data, defaults)
    logger.info(f"Experiment config loaded from {path}: {config.name} ({config.kind})")
    return config
