"""
Experiment runner

Dispatches an ExperimentConfig to the experiment family that implements its
kind and returns the reduced ExperimentResult.
"""

import logging
from typing import Callable, Dict, Optional

from ..core.exceptions import ConfigError
from .clt import CLTExperiments
from .config import EXPERIMENT_KINDS, ExperimentConfig
from .flow_statistics import FlowStatisticsExperiments
from .identities import IdentityExperiments
from .limits import LimitExperiments
from .pool import ReplicaPool
from .results import ExperimentResult
from .web import WebExperiments


class ExperimentRunner:
    """
    Runs experiments of every kind on one shared replica pool.

    Each family keeps its own methods; the runner only maps a kind to the
    method that implements it.
    """

    def __init__(self, threads: int = 1, progress: bool = True):
        self.logger = logging.getLogger(__name__)
        self.pool = ReplicaPool(threads=threads, progress=progress)

        flow = FlowStatisticsExperiments(self.pool)
        clt = CLTExperiments(self.pool)
        limits = LimitExperiments(self.pool)
        web = WebExperiments(self.pool)
        identities = IdentityExperiments(self.pool)

        self._dispatch: Dict[str, Callable[[ExperimentConfig], ExperimentResult]] = {
            "intensity": flow.run_intensity,
            "pair_density": flow.run_pair_density,
            "clt_single": clt.run_clt_single,
            "clt_multi_time": clt.run_clt_multi_time,
            "clt_multi_function": clt.run_clt_multi_function,
            "mixing": clt.run_mixing,
            "continuity": clt.run_continuity,
            "double_integral": limits.run_double_integral,
            "basis_independence": limits.run_basis_independence,
            "web_coalescence": web.run_web_coalescence,
            "xi_stationarity": web.run_xi_stationarity,
            "identities": identities.run_identities,
        }
        missing = set(EXPERIMENT_KINDS) - set(self._dispatch)
        if missing:
            raise ConfigError(f"no runner for experiment kinds {sorted(missing)}")

    @property
    def kinds(self):
        return tuple(self._dispatch)

    def run(self, cfg: ExperimentConfig, seed: Optional[int] = None) -> ExperimentResult:
        """
        Run one experiment.

        Args:
            cfg: Experiment configuration
            seed: Optional override of the configured master seed

        Returns:
            ExperimentResult with per-replica table, summary and checks
        """
        if seed is not None:
            cfg = cfg.with_seed(seed)
        self.logger.info(
            f"Starting experiment {cfg.name} ({cfg.kind}): R={cfg.replicas}, n={cfg.blocks}, "
            f"times={list(cfg.times)}, seed={cfg.seed}, threads={self.pool.threads}"
        )
        return self._dispatch[cfg.kind](cfg)
