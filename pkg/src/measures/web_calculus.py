"""
Inclusion-exclusion calculus for images of a point measure under a monotone map.

For a non-decreasing φ on the atoms of N, ν counts the distinct images, and
μ_{k,φ} pushes forward to φ(v_*) the ordered k-tuples of distinct atoms whose
extreme points share an image. Since φ is monotone, those are exactly the
tuples inside one level set.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import numpy as np

from ..core.exceptions import ConfigError
from ..kernels.coalescence import gaussian_density, q_density
from .factorial import check_size_guard, ordered_index_tuples
from .point_measure import MonotoneAtomMap, PointMeasure, evaluate_on

logger = logging.getLogger(__name__)

XI_CUTOFF_FACTOR = 8.0


@dataclass(frozen=True)
class LevelSet:
    """Atoms of N sharing one image under φ"""
    image: float
    members: np.ndarray

    @property
    def size(self) -> int:
        return int(self.members.size)


@dataclass(frozen=True)
class WeightedAtoms:
    """Finite measure with integer masses at strictly increasing positions"""
    positions: np.ndarray
    masses: np.ndarray

    def __len__(self) -> int:
        return int(self.positions.size)

    @property
    def total_mass(self) -> int:
        return int(self.masses.sum())

    def as_dict(self) -> Dict[float, int]:
        return {float(p): int(m) for p, m in zip(self.positions, self.masses)}

    def integrate(self, f: Callable) -> float:
        if len(self) == 0:
            return 0.0
        return float(np.sum(self.masses * evaluate_on(f, self.positions)))


def _require_aligned(N: PointMeasure, phi: MonotoneAtomMap):
    if len(phi.domain) != len(N) or not np.array_equal(phi.domain.atoms, N.atoms):
        raise ConfigError("the monotone map must be defined on the atoms of the measure")


def level_sets(phi: MonotoneAtomMap) -> List[LevelSet]:
    """Clusters of atoms sharing an image, in increasing order of the image"""
    if phi.values.size == 0:
        return []
    images, starts, counts = np.unique(phi.values, return_index=True, return_counts=True)
    atoms = phi.domain.atoms
    return [LevelSet(image=float(y), members=atoms[i:i + m])
            for y, i, m in zip(images, starts, counts)]


def nu_measure(N: PointMeasure, phi: MonotoneAtomMap) -> PointMeasure:
    """ν: unit mass at each distinct value of φ over the atoms of N"""
    _require_aligned(N, phi)
    return PointMeasure(np.unique(phi.values))


def _level_set_masses(levels: List[LevelSet], k: int) -> WeightedAtoms:
    kept = [(lv.image, math.perm(lv.size, k)) for lv in levels if lv.size >= k]
    if not kept:
        return WeightedAtoms(np.empty(0), np.empty(0, dtype=np.int64))
    positions, masses = zip(*kept)
    return WeightedAtoms(np.array(positions, dtype=float), np.array(masses, dtype=np.int64))


def _enumerated_masses(N: PointMeasure, phi: MonotoneAtomMap, k: int) -> WeightedAtoms:
    values = phi.values
    images: List[np.ndarray] = []
    for idx in ordered_index_tuples(len(N), k):
        keep = np.ones(idx.shape[1], dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                keep &= idx[i] != idx[j]
        idx = idx[:, keep]
        # atoms are sorted, so v_* and v^* carry the smallest and largest index
        low = values[idx.min(axis=0)]
        high = values[idx.max(axis=0)]
        images.append(low[low == high])
    hits = np.concatenate(images) if images else np.empty(0)
    positions, masses = np.unique(hits, return_counts=True)
    return WeightedAtoms(positions.astype(float), masses.astype(np.int64))


def mu_k_phi(N: PointMeasure, phi: MonotoneAtomMap, k: int, method: str = "level_sets") -> WeightedAtoms:
    """
    μ_{k,φ}: for every ordered k-tuple of distinct atoms with φ(v_*) = φ(v^*),
    a unit mass at φ(v_*).

    Args:
        N: Point measure
        phi: Monotone map on the atoms of N
        k: Order, 1..4
        method: "level_sets" counts m!/(m-k)! tuples per level set of size m;
            "enumerate" walks every ordered tuple

    Raises:
        SizeGuardError: |atoms|^k exceeds the guard
    """
    check_size_guard(len(N), k)
    _require_aligned(N, phi)
    if method == "level_sets":
        return _level_set_masses(level_sets(phi), k)
    if method == "enumerate":
        if len(N) == 0:
            return WeightedAtoms(np.empty(0), np.empty(0, dtype=np.int64))
        return _enumerated_masses(N, phi, k)
    raise ConfigError(f"unknown mu_k_phi method '{method}'")


def inclusion_exclusion_eval(N: PointMeasure, phi: MonotoneAtomMap, f: Callable) -> Tuple[float, float]:
    """
    Both sides of ∫ f dν = Σ_k (-1)^{k+1} (1/k!) ∫ f dμ_{k,φ}.

    The series stops at the largest level-set size. Coefficients per image are
    accumulated as exact rationals before multiplying f.

    Returns:
        (lhs, rhs)
    """
    _require_aligned(N, phi)
    levels = level_sets(phi)
    if not levels:
        return 0.0, 0.0
    images = np.array([lv.image for lv in levels])
    values = evaluate_on(f, images)
    lhs = float(values.sum())

    max_size = max(lv.size for lv in levels)
    weights: Dict[float, Fraction] = {lv.image: Fraction(0) for lv in levels}
    for k in range(1, max_size + 1):
        sign = Fraction((-1) ** (k + 1), math.factorial(k))
        masses = _level_set_masses(levels, k)
        for y, m in zip(masses.positions, masses.masses):
            weights[float(y)] += sign * int(m)

    coeffs = np.array([float(weights[float(y)]) for y in images])
    rhs = float(np.sum(coeffs * values))
    return lhs, rhs


def xi_process(
    N: PointMeasure,
    k: int,
    s: float,
    v: float,
    cutoff: float,
    nodes: int = 200,
) -> float:
    """
    ξ_k(v) = ∫ q_s(u_*, u^*, v) N^{(k)}(du) for k in {1, 2}, over atoms within
    ``cutoff`` of v. For k = 1, q_s(u, u, v) is the Gaussian density.

    Dropped pairs have an atom farther than ``cutoff`` from v; their q-mass near
    v is bounded by the Gaussian tail e^{-cutoff²/2s}.

    Raises:
        ConfigError: k not in {1, 2} or cutoff < 8√s
    """
    if k not in (1, 2):
        raise ConfigError(f"xi_process supports k in {{1, 2}}, got {k}")
    if cutoff < XI_CUTOFF_FACTOR * math.sqrt(s):
        raise ConfigError(f"cutoff {cutoff} is below {XI_CUTOFF_FACTOR}·√s = {XI_CUTOFF_FACTOR * math.sqrt(s):.4g}")

    near = N.atoms[np.abs(N.atoms - v) <= cutoff]
    if near.size == 0:
        return 0.0
    if k == 1:
        return float(gaussian_density(s, near, v).sum())
    if near.size < 2:
        return 0.0
    i, j = np.triu_indices(near.size, k=1)
    # each unordered pair appears twice among ordered tuples
    return float(2.0 * q_density(s, near[i], near[j], v, nodes=nodes).sum())
