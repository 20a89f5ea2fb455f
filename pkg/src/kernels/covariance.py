"""
Lattice covariance kernel of the block sequence and the limit variances.

G_t(v1, v2) = g_t(v1 - v2) + 2 Σ_{l>=1} g_t(v1 - v2 + l) depends on x = v1 - v2 only;
its symmetrisation G̃_t(u, v) = ½(G_t(u, v) + G_t(v, u)) is

    Ĝ(x) = g_t(x) + Σ_{l>=1} [g_t(l + x) + g_t(l - x)].
"""

import logging
from typing import Callable, Union

import numpy as np

from ..core.exceptions import NumericalConsistencyError
from .context import KernelContext
from .densities import g, rho1, rho2
from .periodic import PeriodicFunction
from .quadrature import diagonal_split_rule

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _lattice(ctx: KernelContext) -> np.ndarray:
    return np.arange(1, ctx.series_truncation_L + 1, dtype=float)


def kernel_of_difference(ctx: KernelContext, x: ArrayLike) -> np.ndarray:
    """G_t as a function of x = v1 - v2"""
    ctx.validate()
    x = np.asarray(x, dtype=float)
    shifted = x[..., None] + _lattice(ctx)
    return g(ctx, x) + 2.0 * g(ctx, shifted).sum(axis=-1)


def symmetric_kernel_of_difference(ctx: KernelContext, x: ArrayLike) -> np.ndarray:
    """G̃_t as a function of x = u - v; even in x"""
    ctx.validate()
    x = np.asarray(x, dtype=float)
    lattice = _lattice(ctx)
    right = g(ctx, lattice + x[..., None]).sum(axis=-1)
    left = g(ctx, lattice - x[..., None]).sum(axis=-1)
    return g(ctx, x) + (right + left)


def G_kernel(ctx: KernelContext, v1: ArrayLike, v2: ArrayLike) -> np.ndarray:
    """G_t(v1, v2) = g(v1 - v2) + 2 Σ_{l=1..L} g(v1 - v2 + l)"""
    return kernel_of_difference(ctx, np.asarray(v1, dtype=float) - np.asarray(v2, dtype=float))


def G_tilde(ctx: KernelContext, u: ArrayLike, v: ArrayLike) -> np.ndarray:
    """Symmetrised kernel ½(G_t(u, v) + G_t(v, u)); symmetric by construction"""
    return symmetric_kernel_of_difference(ctx, np.abs(np.asarray(u, dtype=float) - np.asarray(v, dtype=float)))


def kernel_double_integral(
    ctx: KernelContext,
    F: Callable[[np.ndarray, np.ndarray], np.ndarray],
    symmetric: bool = False,
) -> float:
    """
    ∬_{[0,1]^2} F(u, v) G_t(u, v) du dv (or against G̃_t when ``symmetric``).

    Args:
        ctx: Kernel context; ``quad_points`` nodes per axis
        F: Vectorised two-argument integrand
        symmetric: Integrate against G̃_t instead of G_t
    """
    u, v, x, w = diagonal_split_rule(ctx.quad_points)
    x_nodes = x[:, 0]
    if symmetric:
        k_plus = symmetric_kernel_of_difference(ctx, x_nodes)[:, None]
        k_minus = k_plus
    else:
        k_plus = kernel_of_difference(ctx, x_nodes)[:, None]
        k_minus = kernel_of_difference(ctx, -x_nodes)[:, None]
    # F(u, v) sits at u - v = x, F(v, u) at u - v = -x
    total = w * (np.asarray(F(u, v)) * k_plus + np.asarray(F(v, u)) * k_minus)
    return float(total.sum())


def cov_zeta(ctx: KernelContext, f: PeriodicFunction, h: PeriodicFunction) -> float:
    """
    Limit covariance of (X_t^n(f), X_t^n(h)):

        ½∬[f(u)h(v) + f(v)h(u)] G_t(u, v) du dv + (1/√(πt)) ∫_0^1 f h
    """
    def sym(a, b):
        return 0.5 * (f(a) * h(b) + f(b) * h(a))

    value = kernel_double_integral(ctx, sym) + rho1(ctx) * f.l2_inner(h, ctx.quad_points)
    return value


def sigma2(ctx: KernelContext, f: PeriodicFunction) -> float:
    """
    Limit variance of X_t^n(f):

        ∬ f(v1) f(v2) G_t(v1, v2) dv1 dv2 + (1/√(πt)) ∫_0^1 f²

    Raises:
        NumericalConsistencyError: the result is below -abs_tol
    """
    value = cov_zeta(ctx, f, f)
    if value < -ctx.abs_tol:
        raise NumericalConsistencyError(
            f"sigma2({f.label}) = {value:.3e} at t={ctx.t} is negative beyond abs_tol={ctx.abs_tol:g}"
        )
    return value


def mean_block_integral(ctx: KernelContext, f: PeriodicFunction) -> float:
    """E A_{k,t} f = (1/√(πt)) ∫_0^1 f, the same for every block k"""
    return rho1(ctx) * f.integral(ctx.quad_points)


def block_second_moment(ctx: KernelContext, f: PeriodicFunction) -> float:
    """E (A_{k,t} f)² = ∬ f f rho2 + (1/√(πt)) ∫ f²"""
    u, v, x, w = diagonal_split_rule(ctx.quad_points)
    pair = rho2(ctx, 0.0, x[:, 0])[:, None]
    double = float((w * pair * 2.0 * f(u) * f(v)).sum())
    return double + rho1(ctx) * f.l2_inner(f, ctx.quad_points)


def block_variance(ctx: KernelContext, f: PeriodicFunction) -> float:
    """Var A_{k,t} f = ∬ f f g_t + (1/√(πt)) ∫ f²"""
    u, v, x, w = diagonal_split_rule(ctx.quad_points)
    pair = g(ctx, x[:, 0])[:, None]
    double = float((w * pair * 2.0 * f(u) * f(v)).sum())
    return double + rho1(ctx) * f.l2_inner(f, ctx.quad_points)
