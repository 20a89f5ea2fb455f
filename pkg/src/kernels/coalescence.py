"""
Coalescence densities of the flow map over an elapsed time s.

Two paths started at a <= b move independently until they meet. Their
difference is a Brownian motion with variance rate 2 started at d = b - a, and
their midpoint is an independent Brownian motion with variance rate 1/2. If the
difference hits 0 at time r, the merged path sits at N((a+b)/2, r/2) and then
diffuses for the remaining s - r. Hence

    q_s(a, b, u) = ∫_0^s f_hit(r) φ(u; (a+b)/2, s - r/2) dr,
    f_hit(r) = d / √(4πr³) · e^{-d²/4r}.

The substitution r = s·w² removes the r^{-3/2} endpoint. A second substitution
y = c/w with c = d/(2√s) turns the hitting weight into (2/√π)e^{-y²} on
[c, ∞), which is integrated on uniform panels over a window where the
neglected tail is below e^{-40} relative to the kept mass.
"""

import logging
import math
from itertools import combinations
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb, erfcx

from ..core.exceptions import DomainError, NumericalConsistencyError
from .densities import coalescence_probability
from .quadrature import gauss_legendre

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

SQRT_PI = math.sqrt(math.pi)
_PANELS = 8


def gaussian_density(s: ArrayLike, a: ArrayLike, u: ArrayLike) -> np.ndarray:
    """p_s(a, u): density of a unit-rate Brownian motion started at a, after time s"""
    s = np.asarray(s, dtype=float)
    diff = np.asarray(u, dtype=float) - np.asarray(a, dtype=float)
    return np.exp(-diff * diff / (2.0 * s)) / np.sqrt(2.0 * math.pi * s)


def _hitting_rule(c: np.ndarray, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes y and weights for ∫_c^∞ (2/√π) e^{-(y² - c²)} dy, per element of c"""
    per_panel = max(4, -(-nodes // _PANELS))
    length = np.minimum(9.0, 40.0 / (c + 1.0))
    ref, ref_w = gauss_legendre(per_panel, 0.0, 1.0, breakpoints=np.arange(1, _PANELS) / _PANELS)
    y = c[..., None] + length[..., None] * ref
    scaled = (2.0 / SQRT_PI) * np.exp(-(y - c[..., None]) * (y + c[..., None]))
    return y, scaled * length[..., None] * ref_w


def q_density(
    s: float,
    a: ArrayLike,
    b: ArrayLike,
    u: ArrayLike,
    nodes: int = 200,
    mass_rtol: float = 1e-6,
) -> np.ndarray:
    """
    Density of {paths from a and b have met by time s, and sit at u}.

    ``a``, ``b`` and ``u`` broadcast against each other.

    Raises:
        DomainError: s <= 0 or b < a
        NumericalConsistencyError: the hitting-time quadrature does not
            reproduce the coalescence probability
    """
    if not s > 0:
        raise DomainError(f"elapsed time must be positive, got s={s}")
    a, b, u = np.broadcast_arrays(np.asarray(a, dtype=float),
                                  np.asarray(b, dtype=float),
                                  np.asarray(u, dtype=float))
    d = b - a
    if np.any(d < 0):
        raise DomainError("q_density requires b >= a")

    mid = 0.5 * (a + b)
    result = np.empty(a.shape, dtype=float)
    together = d == 0.0
    result[together] = gaussian_density(s, mid[together], u[together])

    apart = ~together
    if not np.any(apart):
        return result

    c = d[apart] / (2.0 * math.sqrt(s))
    y, weights = _hitting_rule(c, nodes)

    scaled_mass = weights.sum(axis=-1)
    expected = erfcx(c)
    err = np.abs(scaled_mass - expected)
    if np.any(err > mass_rtol * expected):
        worst = int(np.argmax(err / expected))
        raise NumericalConsistencyError(
            f"hitting-time quadrature mass {scaled_mass[worst]:.6e} differs from "
            f"scaled coalescence probability {expected[worst]:.6e} at d/(2√s)={c[worst]:.3g}"
        )

    # meeting time r = s c²/y², merged position variance s - r/2
    var = s * (1.0 - 0.5 * (c[..., None] / y) ** 2)
    du = u[apart][..., None] - mid[apart][..., None]
    kernel = np.exp(-du * du / (2.0 * var)) / np.sqrt(2.0 * math.pi * var)
    result[apart] = np.exp(-c * c) * (weights * kernel).sum(axis=-1)
    return result


def q_mass(s: float, a: ArrayLike, b: ArrayLike, nodes: int = 200, quad_points: int = 32) -> np.ndarray:
    """
    ∫ q_s(a, b, u) du by composite Gauss-Legendre over (a+b)/2 ± 12√s.

    Every mixture component of q has variance between s/2 and s, so the
    neglected tails are below e^{-72} of the mass.
    """
    a, b = np.broadcast_arrays(np.atleast_1d(np.asarray(a, dtype=float)),
                               np.atleast_1d(np.asarray(b, dtype=float)))
    width = 12.0 * math.sqrt(s)
    ref, ref_w = gauss_legendre(quad_points, -width, width, breakpoints=np.linspace(-width, width, 13)[1:-1])
    mid = 0.5 * (a + b)
    u = mid[:, None] + ref[None, :]
    dens = q_density(s, a[:, None], b[:, None], u, nodes=nodes)
    return (dens * ref_w[None, :]).sum(axis=1)


def expected_cluster_count(atoms: Sequence[float], s: float) -> float:
    """
    Mean number of distinct images of a deterministic sorted atom set under
    the flow map over time s: |atoms| - Σ_adjacent P(neighbours coalesced).
    """
    atoms = np.sort(np.asarray(atoms, dtype=float))
    if atoms.size == 0:
        return 0.0
    gaps = np.diff(atoms)
    return float(atoms.size - coalescence_probability(s, gaps).sum())


def _smoothed(f: Callable, s: float, a: np.ndarray, b: np.ndarray, nodes: int, pair: bool) -> np.ndarray:
    """∫ f(v) p_s(a, v) dv (pair=False) or ∫ f(v) q_s(a, b, v) dv (pair=True)"""
    half_width = 10.0 * math.sqrt(s)
    inner = np.linspace(-half_width, half_width, 9)[1:-1]
    v_ref, w_ref = gauss_legendre(nodes, -half_width, half_width, breakpoints=inner)
    centre = 0.5 * (a + b)
    v = centre[:, None] + v_ref[None, :]
    if pair:
        dens = q_density(s, a[:, None], b[:, None], v)
    else:
        dens = gaussian_density(s, a[:, None], v)
    return (dens * np.asarray(f(v), dtype=float) * w_ref[None, :]).sum(axis=1)


def expected_nu_integral(
    atoms: Sequence[float],
    f: Callable,
    s: float,
    max_order: Optional[int] = None,
    nodes: int = 48,
) -> float:
    """
    E ∫ f dν for a deterministic finite atom set and the random flow map.

    The alternating series Σ_k (-1)^{k+1}/k! ∫∫ f(v) q_s(u_*, u^*, v) dv μ^(k)(du)
    groups ordered k-tuples by their extreme atoms (i, j): there are
    k!·C(j-i-1, k-2) of them. With ``max_order=None`` the series is summed to
    completion, and only adjacent extremes survive. A finite ``max_order``
    returns the partial sum.
    """
    atoms = np.sort(np.asarray(atoms, dtype=float))
    n = atoms.size
    if n == 0:
        return 0.0
    total = float(_smoothed(f, s, atoms, atoms, nodes, pair=False).sum())
    if n == 1:
        return total

    if max_order is None:
        left, right = atoms[:-1], atoms[1:]
        return total - float(_smoothed(f, s, left, right, nodes, pair=True).sum())

    pairs = np.array(list(combinations(range(n), 2)))
    left, right = atoms[pairs[:, 0]], atoms[pairs[:, 1]]
    interior = pairs[:, 1] - pairs[:, 0] - 1
    coeff = np.zeros(len(pairs))
    for k in range(2, max_order + 1):
        coeff += (-1.0) ** (k + 1) * comb(interior, k - 2)
    return total + float((coeff * _smoothed(f, s, left, right, nodes, pair=True)).sum())
