"""
System Configuration Module

Handles loading of the runtime defaults shared by the CLI, the experiment
runner and the analytic kernels.
"""

import os
import yaml
import logging
from pathlib import Path
from typing import Dict, Any, Optional
from dataclasses import dataclass, field, asdict

THREADS_ENV_VAR = "COALESCE_THREADS"


@dataclass
class KernelDefaults:
    """Defaults for analytic evaluations"""
    abs_tol: float = 1e-10
    quad_points: int = 64
    q_nodes: int = 200
    residual_tol: float = 1e-6
    eigen_floor_tol: float = 1e-8


@dataclass
class SimulationDefaults:
    """Defaults for the particle simulation"""
    dt_fraction: float = 1e-3
    coalescence_mode: str = "bridge"
    grid_spacing: float = 0.01


@dataclass
class RuntimeConfig:
    """Execution settings"""
    threads: int = 1
    results_dir: str = "results"
    log_level: str = "INFO"
    progress_bars: bool = True


@dataclass
class SystemConfig:
    """Main system configuration"""

    kernels: KernelDefaults = field(default_factory=KernelDefaults)
    simulation: SimulationDefaults = field(default_factory=SimulationDefaults)
    runtime: RuntimeConfig = field(default_factory=RuntimeConfig)

    @classmethod
    def load_from_file(cls, config_path: str) -> 'SystemConfig':
        """Load configuration from YAML file"""
        config_file = Path(config_path)

        if not config_file.exists():
            logging.warning(f"Config file {config_path} not found, using defaults")
            return cls()

        with open(config_file, 'r') as f:
            config_data = yaml.safe_load(f) or {}

        config = cls(
            kernels=KernelDefaults(**config_data.get('kernels', {})),
            simulation=SimulationDefaults(**config_data.get('simulation', {})),
            runtime=RuntimeConfig(**config_data.get('runtime', {})),
        )

        logging.info(f"Configuration loaded from {config_path}")
        return config

    def resolve_threads(self, cli_threads: Optional[int] = None) -> int:
        """Environment variable overrides the CLI flag, which overrides YAML"""
        env_value = os.environ.get(THREADS_ENV_VAR)
        if env_value:
            try:
                return max(1, int(env_value))
            except ValueError:
                logging.warning(f"Ignoring non-integer {THREADS_ENV_VAR}={env_value!r}")
        if cli_threads is not None:
            return max(1, cli_threads)
        return max(1, self.runtime.threads)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return {
            'kernels': asdict(self.kernels),
            'simulation': asdict(self.simulation),
            'runtime': asdict(self.runtime),
        }

    def save_to_file(self, config_path: str):
        """Save configuration to YAML file"""
        config_file = Path(config_path)
        config_file.parent.mkdir(parents=True, exist_ok=True)

        with open(config_file, 'w') as f:
            yaml.dump(self.to_dict(), f, default_flow_style=False, indent=2)

        logging.info(f"Configuration saved to {config_path}")
