"""
Coalescing Brownian flow simulation

Particles started from a fine grid approximate the Arratia flow; point
measures are read at checkpoint times and the flow map between two times is
recovered from particle ancestry.
"""

from .config import COALESCENCE_MODES, SimConfig
from .streams import ReplicaStreams
from .particles import (
    ParticleSystem,
    bridge_merge_probability,
    extract_point_measure,
    init_grid,
    run_to,
    step,
)
from .web import WebMap, count_carriers, web_map, web_map_between
from .replica import dump_realizations, realization_rows, simulate_replica

__all__ = [
    'COALESCENCE_MODES',
    'SimConfig',
    'ReplicaStreams',
    'ParticleSystem',
    'bridge_merge_probability',
    'extract_point_measure',
    'init_grid',
    'run_to',
    'step',
    'WebMap',
    'count_carriers',
    'web_map',
    'web_map_between',
    'dump_realizations',
    'realization_rows',
    'simulate_replica',
]
