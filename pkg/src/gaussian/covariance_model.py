"""
Covariance of the limit field ζ on a finite basis.

    matrix_ij = w δ_ij + ∬ e_i(u) G̃_t(u, v) e_j(v) du dv

with white-noise weight w = 1/√(πt) unless overridden, so that the basis
bilinear form reproduces cov_zeta.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import linalg

from ..core.exceptions import KernelConsistencyError
from ..kernels.context import KernelContext
from ..kernels.covariance import symmetric_kernel_of_difference
from ..kernels.densities import rho1
from ..kernels.quadrature import diagonal_split_rule, gauss_legendre
from .basis import BasisSpec

logger = logging.getLogger(__name__)

EIGEN_FLOOR_TOL = 1e-8


@dataclass(frozen=True)
class CovarianceModel:
    """
    Covariance of (ζ(e_0), ..., ζ(e_{M-1})).

    ``raw_matrix`` is the quadrature result; ``matrix`` has negative
    eigenvalues floored at 0 and is the covariance actually sampled.
    ``eigen_floor`` is the magnitude of the most negative floored eigenvalue.
    """
    t: float
    basis: BasisSpec
    raw_matrix: np.ndarray
    matrix: np.ndarray
    eigenvalues: np.ndarray
    sqrt_matrix: np.ndarray
    eigen_floor: float
    white_noise_weight: float

    @property
    def size(self) -> int:
        return self.basis.size


def _cell_toeplitz(kernel: Callable, cells: int, points: int) -> np.ndarray:
    """∬ over cell a × cell b of kernel(u - v), a Toeplitz matrix in a - b"""
    h = 1.0 / cells
    y, wy = gauss_legendre(points, -h, h, breakpoints=[0.0])
    offsets = np.arange(cells)
    values = kernel(offsets[:, None] * h + y[None, :])
    per_offset = (values * ((h - np.abs(y)) * wy)[None, :]).sum(axis=1)
    return linalg.toeplitz(per_offset)


def kernel_gram(basis: BasisSpec, kernel: Callable, quad_points: int = 64) -> np.ndarray:
    """
    ∬ e_i(u) K(u - v) e_j(v) du dv for an even kernel K of the difference.

    Haar bases integrate cell by cell; smooth bases use the diagonal-split rule
    with enough nodes to resolve the highest frequency.
    """
    if basis.piecewise_constant:
        values = basis.cell_values()
        return values @ _cell_toeplitz(kernel, basis.cells, max(quad_points // 2, 16)) @ values.T

    n = max(quad_points, 4 * basis.panels())
    u, v, x, w = diagonal_split_rule(n)
    weighted = (w * kernel(x[:, 0])[:, None]).reshape(-1)
    eu = basis.evaluate(u).reshape(basis.size, -1)
    ev = basis.evaluate(v).reshape(basis.size, -1)
    half = (eu * weighted) @ ev.T
    return half + half.T


def build_covariance(
    t: float,
    basis: BasisSpec,
    ctx: Optional[KernelContext] = None,
    kernel: Optional[Callable] = None,
    white_noise_weight: Optional[float] = None,
    floor_tol: float = EIGEN_FLOOR_TOL,
) -> CovarianceModel:
    """
    Assemble the basis covariance of ζ at time t.

    Args:
        t: Time
        basis: Orthonormal basis
        ctx: Kernel context (built adaptively for t when omitted)
        kernel: Even kernel of the difference replacing G̃_t
        white_noise_weight: Weight of the identity part, 1/√(πt) by default
        floor_tol: Most negative eigenvalue accepted before flooring

    Raises:
        KernelConsistencyError: an eigenvalue is below -floor_tol
    """
    ctx = ctx or KernelContext.adaptive(t)
    if kernel is None:
        def kernel(x):
            return symmetric_kernel_of_difference(ctx, x)
    weight = rho1(ctx) if white_noise_weight is None else float(white_noise_weight)

    raw = weight * np.eye(basis.size) + kernel_gram(basis, kernel, ctx.quad_points)
    raw = 0.5 * (raw + raw.T)

    eigenvalues, eigenvectors = linalg.eigh(raw)
    lowest = float(eigenvalues[0])
    if lowest < -floor_tol:
        raise KernelConsistencyError(
            f"covariance on {basis.label} at t={t} has eigenvalue {lowest:.3e} below -{floor_tol:g}"
        )
    negative = eigenvalues < 0
    floor = 0.0
    if np.any(negative):
        floor = -lowest
        logger.warning(
            f"Flooring {int(negative.sum())} negative eigenvalue(s) of the {basis.label} covariance "
            f"at t={t}; most negative {lowest:.3e}"
        )
    clipped = np.clip(eigenvalues, 0.0, None)
    matrix = raw if floor == 0.0 else (eigenvectors * clipped) @ eigenvectors.T
    matrix = 0.5 * (matrix + matrix.T)
    sqrt_matrix = (eigenvectors * np.sqrt(clipped)) @ eigenvectors.T
    sqrt_matrix = 0.5 * (sqrt_matrix + sqrt_matrix.T)

    for arr in (raw, matrix, clipped, sqrt_matrix):
        arr.setflags(write=False)
    return CovarianceModel(
        t=t,
        basis=basis,
        raw_matrix=raw,
        matrix=matrix,
        eigenvalues=clipped,
        sqrt_matrix=sqrt_matrix,
        eigen_floor=floor,
        white_noise_weight=weight,
    )


def kernel_eigenvalues(cov: CovarianceModel) -> np.ndarray:
    """Eigenvalues of the quadrature covariance before flooring, ascending"""
    return linalg.eigvalsh(cov.raw_matrix)
