"""
Monte Carlo experiments comparing the simulated flow with the analytic
predictions: densities, central limit theorems, mixing, continuity, the
Gaussian limit of double integrals and the flow-map calculus.
"""

from .config import (
    DEFAULT_TOLERANCES,
    EXPERIMENT_KINDS,
    ExperimentConfig,
    load_experiment_config,
)
from .results import Check, ExperimentResult, read_table, summarize, two_sample_ks
from .pool import ReplicaPool
from .runner import ExperimentRunner

__all__ = [
    'DEFAULT_TOLERANCES',
    'EXPERIMENT_KINDS',
    'ExperimentConfig',
    'load_experiment_config',
    'Check',
    'ExperimentResult',
    'summarize',
    'read_table',
    'two_sample_ks',
    'ReplicaPool',
    'ExperimentRunner',
]
