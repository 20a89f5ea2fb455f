"""
Flow map φ_{t1,t2} between two times of one realization.

Each particle at t1 is carried by the t2 particle whose ancestry interval
contains its own, so the map is read off the ancestry without tracking paths.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import DomainError, InternalError
from ..measures.point_measure import MonotoneAtomMap, PointMeasure
from .particles import ParticleSystem, run_to
from .streams import ReplicaStreams


@dataclass(frozen=True)
class WebMap:
    """φ_{t1,t2} on the particles alive at t1"""
    source_atoms: PointMeasure
    image: np.ndarray
    t1: float
    t2: float

    def __post_init__(self):
        image = np.array(self.image, dtype=float)
        if image.size != len(self.source_atoms):
            raise InternalError("web map image does not match its source atoms")
        if np.any(np.diff(image) < 0):
            raise InternalError("web map is not monotone")
        image.setflags(write=False)
        object.__setattr__(self, "image", image)

    def restrict(self, window: Optional[Tuple[float, float]] = None) -> MonotoneAtomMap:
        """The map on source atoms inside ``window``, as a MonotoneAtomMap"""
        atoms = self.source_atoms.atoms
        if window is None:
            return MonotoneAtomMap(self.source_atoms, self.image)
        lo, hi = window
        mask = (atoms >= lo) & (atoms <= hi)
        return MonotoneAtomMap(PointMeasure(atoms[mask], (lo, hi)), self.image[mask])

    def __call__(self, x) -> np.ndarray:
        """
        Image of source atoms given by position.

        Raises:
            DomainError: some x is not an atom at t1
        """
        atoms = self.source_atoms.atoms
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x)
        index = np.searchsorted(atoms, flat)
        found = index < atoms.size
        found[found] = atoms[index[found]] == flat[found]
        if not np.all(found):
            raise DomainError(f"{flat[~found][:5].tolist()} not atoms of the flow at t={self.t1}")
        return self.image[index].reshape(x.shape)


def web_map_between(ps1: ParticleSystem, ps2: ParticleSystem) -> WebMap:
    """φ_{t1,t2} from two states of the same realization, ps1 earlier than ps2"""
    if ps2.time < ps1.time or ps1.grid_size != ps2.grid_size:
        raise DomainError("web map needs two states of one realization in time order")
    carrier = np.searchsorted(ps2.ancestry_lo, ps1.ancestry_lo, side="right") - 1
    if np.any(carrier < 0) or np.any(ps1.ancestry_hi > ps2.ancestry_hi[carrier]):
        raise InternalError("ancestry at the later time does not refine the earlier one")
    return WebMap(
        source_atoms=PointMeasure(ps1.positions),
        image=ps2.positions[carrier],
        t1=ps1.time,
        t2=ps2.time,
    )


def count_carriers(ps1: ParticleSystem, ps2: ParticleSystem, window: Tuple[float, float]) -> int:
    """
    Number of particles at the later time that absorbed some particle alive
    inside ``window`` at the earlier time, counted by overlap of ancestry
    intervals.
    """
    lo, hi = window
    inside = np.flatnonzero((ps1.positions >= lo) & (ps1.positions <= hi))
    if inside.size == 0:
        return 0
    first, last = ps1.ancestry_lo[inside[0]], ps1.ancestry_hi[inside[-1]]
    return int(np.count_nonzero((ps2.ancestry_lo <= last) & (ps2.ancestry_hi >= first)))


def web_map(
    ps_at_t1: ParticleSystem,
    t2: float,
    dt: float,
    rng: ReplicaStreams,
    mode: str = "bridge",
) -> Tuple[ParticleSystem, WebMap]:
    """Continue the realization to t2 and return the state there with φ_{t1,t2}"""
    if t2 < ps_at_t1.time:
        raise DomainError(f"t2={t2} is before t1={ps_at_t1.time}")
    ps2 = run_to(ps_at_t1, t2, dt, rng, mode)
    return ps2, web_map_between(ps_at_t1, ps2)
