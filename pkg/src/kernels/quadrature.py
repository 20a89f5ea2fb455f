"""
Quadrature rules shared by the analytic kernels and the Gaussian-limit module.

Double integrals over [0,1]^2 whose kernel depends on u - v are evaluated in
the coordinates (x = u - v, s): the kink of the coalescing pair density at
u = v then lies on a panel boundary.
"""

from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def _reference_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(
    n: int,
    lo: float = 0.0,
    hi: float = 1.0,
    breakpoints: Optional[Sequence[float]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule on [lo, hi]

    Args:
        n: Nodes per panel
        lo: Lower limit
        hi: Upper limit
        breakpoints: Interior points where the integrand may lose smoothness;
            each sub-interval becomes its own panel

    Returns:
        (nodes, weights) as flat arrays
    """
    edges = [lo]
    if breakpoints is not None:
        edges.extend(sorted(b for b in breakpoints if lo < b < hi))
    edges.append(hi)

    ref_nodes, ref_weights = _reference_rule(n)
    nodes = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        nodes.append(a + half * (ref_nodes + 1.0))
        weights.append(half * ref_weights)
    return np.concatenate(nodes), np.concatenate(weights)


@lru_cache(maxsize=16)
def diagonal_split_rule(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Tensor rule for integrals over the triangle 0 <= v <= v + x <= 1.

    With x in (0, 1) and v = s(1 - x), u = v + x:

        ∬_{[0,1]^2} F(u, v) du dv = Σ w [F(u, v) + F(v, u)]

    Returns:
        (u, v, x, w), each of shape (n, n); x varies along axis 0
    """
    x_nodes, x_weights = gauss_legendre(n)
    s_nodes, s_weights = gauss_legendre(n)
    x = np.repeat(x_nodes[:, None], n, axis=1)
    v = s_nodes[None, :] * (1.0 - x)
    u = v + x
    w = (x_weights * (1.0 - x_nodes))[:, None] * s_weights[None, :]
    for arr in (u, v, x, w):
        arr.setflags(write=False)
    return u, v, x, w
