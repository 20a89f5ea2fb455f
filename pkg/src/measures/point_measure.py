"""
Finite point measures and integrals against them.

A PointMeasure is the restriction of N_t to an observation window: strictly
increasing atoms, each of unit mass.
"""

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from ..core.exceptions import ConfigError, WindowError
from ..kernels.context import KernelContext
from ..kernels.covariance import mean_block_integral
from ..kernels.periodic import PeriodicFunction


@dataclass(frozen=True)
class PointMeasure:
    """Sum of unit Dirac masses at strictly increasing atoms inside a window"""
    atoms: np.ndarray
    window: Tuple[float, float] = (-math.inf, math.inf)

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float).reshape(-1)
        lo, hi = float(self.window[0]), float(self.window[1])
        if lo > hi:
            raise ConfigError(f"window lower end {lo} exceeds upper end {hi}")
        if atoms.size > 1 and np.any(np.diff(atoms) <= 0):
            raise ConfigError("atoms must be strictly increasing")
        if atoms.size and (atoms[0] < lo or atoms[-1] > hi):
            raise ConfigError(f"atoms must lie in the window [{lo}, {hi}]")
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "window", (lo, hi))

    def __len__(self) -> int:
        return int(self.atoms.size)

    def restrict(self, lo: float, hi: float, closed: bool = True) -> 'PointMeasure':
        """Atoms in [lo, hi] (or [lo, hi) when ``closed`` is False)"""
        if closed:
            mask = (self.atoms >= lo) & (self.atoms <= hi)
        else:
            mask = (self.atoms >= lo) & (self.atoms < hi)
        return PointMeasure(self.atoms[mask], (lo, hi))

    def covers(self, lo: float, hi: float) -> bool:
        return self.window[0] <= lo and hi <= self.window[1]


@dataclass(frozen=True)
class MonotoneAtomMap:
    """A non-decreasing map restricted to the atoms of a point measure"""
    domain: PointMeasure
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != len(self.domain):
            raise ConfigError(f"map has {values.size} values for {len(self.domain)} atoms")
        if values.size > 1 and np.any(np.diff(values) < 0):
            raise ConfigError("map values must be non-decreasing")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __call__(self, index):
        return self.values[index]


def evaluate_on(f: Callable, *xs: np.ndarray) -> np.ndarray:
    """f(*xs) broadcast to the shape of the arguments, so constant integrands count atoms"""
    return np.broadcast_to(np.asarray(f(*xs), dtype=float), np.shape(xs[0]))


def integrate(N: PointMeasure, f: Callable) -> float:
    """∫ f dN = Σ_i f(u_i)"""
    if len(N) == 0:
        return 0.0
    return float(np.sum(evaluate_on(f, N.atoms)))


def block_integral(N: PointMeasure, f: PeriodicFunction, k: int) -> float:
    """
    A_{k,t} f = ∫_{[k, k+1)} f dN_t, half-open so blocks partition the line.

    Raises:
        WindowError: [k, k+1] is not inside the window
    """
    if not N.covers(k, k + 1):
        raise WindowError(f"block [{k}, {k + 1}] is outside the window {N.window}")
    mask = (N.atoms >= k) & (N.atoms < k + 1)
    if not np.any(mask):
        return 0.0
    return float(np.sum(evaluate_on(f, N.atoms[mask])))


def block_integrals(N: PointMeasure, f: PeriodicFunction, first: int, count: int) -> np.ndarray:
    """Vector of A_{k,t} f for k = first, ..., first + count - 1"""
    if not N.covers(first, first + count):
        raise WindowError(f"blocks [{first}, {first + count}) are outside the window {N.window}")
    mask = (N.atoms >= first) & (N.atoms < first + count)
    atoms = N.atoms[mask]
    index = np.floor(atoms).astype(int) - first
    return np.bincount(index, weights=evaluate_on(f, atoms), minlength=count).astype(float)


def clt_statistic(N: PointMeasure, f: PeriodicFunction, n: int, ctx: KernelContext) -> float:
    """
    X_t^n(f) = Σ_{k=0}^{n-1} (A_{k,t} f - E A_{k,t} f) / √n

    Raises:
        WindowError: the window does not cover [0, n]
    """
    if n < 1:
        raise ConfigError(f"block count must be positive, got n={n}")
    if not N.covers(0, n):
        raise WindowError(f"window {N.window} does not cover [0, {n}]")
    blocks = block_integrals(N, f, 0, n)
    return float((blocks.sum() - n * mean_block_integral(ctx, f)) / math.sqrt(n))
