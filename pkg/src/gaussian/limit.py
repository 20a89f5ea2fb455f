"""
Limit functional of the normalised double integral.

For a symmetric f on [0,1]² with zero mean in each variable, expanded as
f = Σ a_ij e_i ⊗ e_j, the limit is

    A_f(ζ, ζ) + ∬ f(x, y) G_t(x, y) dx dy

where A_f applies the coefficient matrix through Wick products.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from ..core.exceptions import BasisResolutionError, ConfigError
from ..kernels.context import KernelContext
from ..kernels.covariance import kernel_double_integral
from .basis import BasisSpec
from .covariance_model import CovarianceModel
from .field import GaussianFieldSample, HSForm, hs_form_apply, hs_second_moment

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-6
MEAN_TOL = 1e-8


def expand_function(
    f2: Callable[[np.ndarray, np.ndarray], np.ndarray],
    basis: BasisSpec,
    quad: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> Tuple[np.ndarray, float]:
    """
    Project f2 on {e_i ⊗ e_j}.

    Args:
        f2: Vectorised two-variable function on [0,1]²
        basis: Orthonormal basis
        quad: (nodes, weights) on [0,1]; the basis rule when omitted

    Returns:
        (coefficient matrix, L2 residual of the projection relative to ‖f2‖)
    """
    nodes, weights = quad if quad is not None else basis.quadrature()
    X, Y = np.meshgrid(nodes, nodes, indexing="ij")
    F = np.broadcast_to(np.asarray(f2(X, Y), dtype=float), X.shape)
    E = basis.evaluate(nodes) * weights
    coeffs = E @ F @ E.T

    values = basis.evaluate(nodes)
    recon = values.T @ coeffs @ values
    W = np.outer(weights, weights)
    norm2 = float(np.sum(W * F * F))
    if norm2 == 0.0:
        return coeffs, 0.0
    residual = math.sqrt(float(np.sum(W * (F - recon) ** 2)) / norm2)
    return coeffs, residual


def _zero_mean_defect(f2: Callable, basis: BasisSpec) -> float:
    nodes, weights = basis.quadrature()
    X, Y = np.meshgrid(nodes, nodes, indexing="ij")
    F = np.broadcast_to(np.asarray(f2(X, Y), dtype=float), X.shape)
    return float(np.max(np.abs(weights @ F)))


@dataclass(frozen=True)
class LimitFunctionalK2:
    """A_f(ζ, ζ) + ∬ f G_t, prepared once for repeated evaluation"""
    form: HSForm
    kernel_term: float
    residual: float

    def evaluate(self, sample: Union[GaussianFieldSample, np.ndarray], cov: CovarianceModel):
        return hs_form_apply(self.form, sample, cov) + self.kernel_term

    def variance(self, cov: CovarianceModel) -> float:
        return hs_second_moment(self.form, cov)


def prepare_limit_functional_k2(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    basis: BasisSpec,
    ctx: KernelContext,
    residual_tol: float = RESIDUAL_TOL,
) -> LimitFunctionalK2:
    """
    Expand f on ``basis`` and integrate it against G_t.

    Raises:
        BasisResolutionError: expansion residual above ``residual_tol``
    """
    coeffs, residual = expand_function(f, basis)
    if residual > residual_tol:
        raise BasisResolutionError(
            f"expansion residual {residual:.3e} on {basis.label} exceeds tolerance {residual_tol:g}"
        )
    defect = _zero_mean_defect(f, basis)
    if defect > MEAN_TOL:
        logger.warning(f"f is not zero-mean in each variable (defect {defect:.2e}); limit may not apply")
    sym = 0.5 * (coeffs + coeffs.T)
    return LimitFunctionalK2(
        form=HSForm(sym, symmetry_tol=1e-9),
        kernel_term=kernel_double_integral(ctx, f),
        residual=residual,
    )


def limit_functional_k2(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    t: float,
    sample: Union[GaussianFieldSample, np.ndarray],
    cov: CovarianceModel,
    ctx: Optional[KernelContext] = None,
    residual_tol: float = RESIDUAL_TOL,
):
    """A_f(ζ, ζ) + ∬ f G_t for one sample or a batch of samples"""
    if not math.isclose(cov.t, t, rel_tol=1e-12):
        raise ConfigError(f"covariance is built for t={cov.t}, not t={t}")
    ctx = ctx or KernelContext.adaptive(t)
    prepared = prepare_limit_functional_k2(f, cov.basis, ctx, residual_tol)
    return prepared.evaluate(sample, cov)


def pairing_count(k: int) -> int:
    """
    Complete pairings of k Wick factors, k!/((k/2)! 2^{k/2}), for even k.

    For odd k, the pairings leaving exactly one factor unpaired,
    k!/(((k-1)/2)! 2^{(k-1)/2}).
    """
    if k < 0:
        raise ConfigError(f"order must be non-negative, got {k}")
    pairs = k // 2
    return math.factorial(k) // (math.factorial(pairs) * 2 ** pairs)
