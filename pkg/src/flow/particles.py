"""
Coalescing Brownian particles started from a grid.

Particles move with independent N(0, dt) increments until they meet and then
move together. Within a step, an adjacent pair whose gap stays positive may
still have met in between; bridge mode merges it with the zero-crossing
probability of the Brownian bridge of the gap.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import DomainError, InternalError
from ..measures.point_measure import PointMeasure
from .config import SimConfig
from .streams import ReplicaStreams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParticleSystem:
    """
    Live particles at one time.

    Particle i has absorbed the initial grid indices
    ancestry_lo[i]..ancestry_hi[i]; these intervals partition 0..grid_size-1.
    ``steps`` counts the steps taken, and keys the random streams.
    """
    positions: np.ndarray
    ancestry_lo: np.ndarray
    ancestry_hi: np.ndarray
    time: float
    steps: int
    grid_size: int

    def __len__(self) -> int:
        return int(self.positions.size)

    def check_invariants(self):
        """Raises InternalError when ordering or the ancestry partition is broken"""
        if np.any(np.diff(self.positions) <= 0):
            raise InternalError(f"positions not strictly increasing at t={self.time}")
        lo, hi = self.ancestry_lo, self.ancestry_hi
        if lo.size == 0:
            if self.grid_size:
                raise InternalError("all particles lost")
            return
        if lo[0] != 0 or hi[-1] != self.grid_size - 1 or np.any(lo[1:] != hi[:-1] + 1) or np.any(hi < lo):
            raise InternalError(f"ancestry intervals do not partition the grid at t={self.time}")


def init_grid(config: SimConfig) -> ParticleSystem:
    """Particles at w_lo - margin, ..., w_hi + margin with spacing δ; time 0"""
    lo, _ = config.grid_bounds
    n = config.grid_size
    index = np.arange(n)
    return ParticleSystem(
        positions=lo + config.grid_spacing * index,
        ancestry_lo=index.copy(),
        ancestry_hi=index.copy(),
        time=0.0,
        steps=0,
        grid_size=n,
    )


def bridge_merge_probability(d0, d1, dt: float) -> np.ndarray:
    """
    Probability that two unit-rate paths with gaps d0 > 0 before and d1 after
    a step of length dt met during the step. The gap is a Brownian bridge with
    variance rate 2, so the crossing probability is exp(-d0·d1/dt); paths whose
    gap closed (d1 <= 0) have certainly met.
    """
    d0 = np.asarray(d0, dtype=float)
    d1 = np.asarray(d1, dtype=float)
    exponent = -np.clip(d0 * d1, 0.0, None) / dt
    return np.where(d1 <= 0.0, 1.0, np.exp(exponent))


def _merge_runs(positions, lo, hi, flags) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Merge maximal runs of flagged adjacent pairs onto their leftmost particle"""
    starts = np.flatnonzero(np.concatenate(([True], ~flags)))
    ends = np.concatenate((starts[1:] - 1, [positions.size - 1]))
    return positions[starts], lo[starts], hi[ends]


def step(ps: ParticleSystem, dt: float, rng: ReplicaStreams, mode: str = "bridge") -> ParticleSystem:
    """
    One time step: independent N(0, dt) increments, then coalescence.

    Merged particles sit at the post-increment position of the leftmost member.
    Order violations left after a sweep are merged the same way until
    positions are strictly increasing.
    """
    if not dt > 0:
        raise DomainError(f"dt must be positive, got {dt}")
    n = len(ps)
    increments = math.sqrt(dt) * rng.step_generator(ps.steps).standard_normal(n)
    x0 = ps.positions
    x1 = x0 + increments
    lo, hi = ps.ancestry_lo, ps.ancestry_hi

    if n > 1:
        d1 = np.diff(x1)
        if mode == "bridge":
            prob = bridge_merge_probability(np.diff(x0), d1, dt)
            flags = rng.merge_generator(ps.steps).random(n - 1) < prob
        else:
            flags = d1 <= 0.0
        if np.any(flags):
            x1, lo, hi = _merge_runs(x1, lo, hi, flags)

        violations = np.diff(x1) <= 0.0
        while np.any(violations):
            x1, lo, hi = _merge_runs(x1, lo, hi, violations)
            violations = np.diff(x1) <= 0.0

    return ParticleSystem(
        positions=x1,
        ancestry_lo=lo,
        ancestry_hi=hi,
        time=ps.time + dt,
        steps=ps.steps + 1,
        grid_size=ps.grid_size,
    )


def run_to(ps: ParticleSystem, t: float, dt: float, rng: ReplicaStreams, mode: str = "bridge") -> ParticleSystem:
    """Step with ``dt`` until time t; the last step is shortened to land on t"""
    if t < ps.time:
        raise DomainError(f"target time {t} is before the current time {ps.time}")
    # float accumulation of dt must not add a spurious tiny step
    tol = 1e-9 * dt
    while t - ps.time > tol:
        ps = step(ps, min(dt, t - ps.time), rng, mode)
    if ps.time != t:
        ps = ParticleSystem(ps.positions, ps.ancestry_lo, ps.ancestry_hi, float(t), ps.steps, ps.grid_size)
    return ps


def extract_point_measure(ps: ParticleSystem, window: Optional[Tuple[float, float]] = None) -> PointMeasure:
    """Live particle positions inside ``window`` (all particles when omitted)"""
    if window is None:
        return PointMeasure(ps.positions)
    lo, hi = window
    mask = (ps.positions >= lo) & (ps.positions <= hi)
    return PointMeasure(ps.positions[mask], (lo, hi))
