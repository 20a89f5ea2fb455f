"""
Main System Module

Binds the runtime configuration to the experiment runner and the analytic
kernels, so every front-end sees the same defaults.
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .config import SystemConfig
from ..experiments.config import ExperimentConfig, load_experiment_config
from ..experiments.results import ExperimentResult
from ..experiments.runner import ExperimentRunner
from ..kernels.context import KernelContext

DEFAULT_CONFIG_PATH = "config/system_config.yaml"


class CoalesceSystem:
    """
    Coalescing-flow toolkit system

    Holds the YAML defaults and resolves them against experiment files and
    command-line overrides.
    """

    def __init__(self, config_path: Optional[str] = None, threads: Optional[int] = None):
        """
        Initialize the system

        Args:
            config_path: Path to the YAML configuration file
            threads: Command-line thread count; COALESCE_THREADS still wins
        """
        self.logger = logging.getLogger(__name__)

        if config_path:
            self.config = SystemConfig.load_from_file(config_path)
        else:
            self.config = SystemConfig()
        self.cli_threads = threads

    @property
    def results_dir(self) -> Path:
        return Path(self.config.runtime.results_dir)

    def simulation_defaults(self) -> Dict[str, Any]:
        """SimConfig fields the experiment files may leave out"""
        sim = self.config.simulation
        return {
            "dt_fraction": sim.dt_fraction,
            "coalescence_mode": sim.coalescence_mode,
            "grid_spacing": sim.grid_spacing,
        }

    def kernel_defaults(self) -> Dict[str, Any]:
        kernels = self.config.kernels
        return {
            "abs_tol": kernels.abs_tol,
            "quad_points": kernels.quad_points,
            "q_nodes": kernels.q_nodes,
            "residual_tol": kernels.residual_tol,
            "eigen_floor_tol": kernels.eigen_floor_tol,
        }

    def kernel_context(self, t: float) -> KernelContext:
        """Kernel context at time t with the configured tolerances"""
        defaults = self.kernel_defaults()
        return KernelContext.adaptive(t, defaults["abs_tol"], defaults["quad_points"], defaults["q_nodes"])

    def load_experiment(self, path: Union[str, Path]) -> ExperimentConfig:
        """Read an experiment file and fill in the kernel settings it leaves out"""
        cfg = load_experiment_config(path, self.simulation_defaults())
        kernel = {**self.kernel_defaults(), **cfg.kernel}
        return replace(cfg, kernel=kernel)

    def log_level(self, verbose: bool = False) -> int:
        """Logging level from the YAML ``runtime.log_level``; ``--verbose`` forces DEBUG"""
        if verbose:
            return logging.DEBUG
        level = logging.getLevelName(str(self.config.runtime.log_level).upper())
        if not isinstance(level, int):
            self.logger.warning(f"Unknown log_level {self.config.runtime.log_level!r}, using INFO")
            return logging.INFO
        return level

    def threads_for(self, cfg: Optional[ExperimentConfig] = None) -> int:
        """COALESCE_THREADS, then --threads, then the experiment file, then the YAML value"""
        cli = self.cli_threads
        if cli is None and cfg is not None and cfg.threads is not None:
            cli = int(cfg.threads)
        return self.config.resolve_threads(cli)

    def run_experiment(self, cfg: ExperimentConfig, seed: Optional[int] = None) -> ExperimentResult:
        """Run ``cfg`` on a pool sized by the thread precedence"""
        threads = self.threads_for(cfg)
        runner = ExperimentRunner(threads=threads, progress=self.config.runtime.progress_bars)
        return runner.run(cfg, seed=seed)
