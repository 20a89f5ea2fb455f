"""
Shared plumbing for the experiment families
"""

import logging
import time
from typing import Any, Callable, Dict, List, Optional

import pandas as pd

from ..flow.config import SimConfig
from ..flow.particles import ParticleSystem
from ..flow.replica import simulate_replica
from .config import ExperimentConfig
from .pool import ReplicaPool
from .results import ExperimentResult


class ExperimentBase:
    """
    Base class for experiment families.

    Subclasses build per-replica rows in a worker function; the pool returns
    them in replica order and the subclass reduces them into an
    ExperimentResult.
    """

    def __init__(self, pool: Optional[ReplicaPool] = None):
        self.pool = pool or ReplicaPool()
        self.logger = logging.getLogger(__name__)

    @staticmethod
    def states(simulation: SimConfig, replica_id: int) -> Dict[float, ParticleSystem]:
        """Checkpoint time -> particle state for one replica"""
        return dict(simulate_replica(simulation, replica_id))

    def collect(self, cfg: ExperimentConfig, worker: Callable[[int], List[Dict[str, Any]]],
                replicas: Optional[int] = None, desc: Optional[str] = None) -> pd.DataFrame:
        """Run ``worker`` over replicas and stack its rows, ordered by replica"""
        count = cfg.replicas if replicas is None else replicas
        chunks = self.pool.map(worker, count, desc=desc or cfg.name)
        rows = [row for chunk in chunks for row in chunk]
        return pd.DataFrame(rows)

    def finish(self, cfg: ExperimentConfig, result: ExperimentResult, started: float) -> ExperimentResult:
        result.runtime.update({
            "seconds": round(time.perf_counter() - started, 3),
            "replicas": cfg.replicas,
            "threads": self.pool.threads,
            "seed": cfg.seed,
        })
        status = "PASS" if result.passed else "FAIL"
        self.logger.info(f"Experiment {cfg.name} finished: {status} in {result.runtime['seconds']}s")
        for check in result.failed_checks:
            self.logger.warning(
                f"{cfg.name}: check '{check.name}' failed (observed {check.observed}, "
                f"expected {check.expected}, tolerance {check.tolerance})"
            )
        return result
