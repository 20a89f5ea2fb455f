"""
Analytic kernels of the coalescing flow point measure N_t

Closed-form one- and two-point densities, the lattice covariance kernel of the
block sequence, limit variances, mixing bounds and the coalescence density of
the flow map.
"""

from .context import KernelContext, truncation_tail_bound
from .periodic import PeriodicFunction, SeparableFunction2
from .densities import (
    MixingBound,
    coalescence_probability,
    density_upper_bound,
    g,
    g_envelope,
    mixing_bound,
    operator_norm_bound,
    pair_correlation,
    rho1,
    rho2,
)
from .covariance import (
    G_kernel,
    G_tilde,
    block_second_moment,
    block_variance,
    cov_zeta,
    kernel_double_integral,
    mean_block_integral,
    sigma2,
)
from .coalescence import (
    expected_cluster_count,
    expected_nu_integral,
    gaussian_density,
    q_density,
    q_mass,
)

__all__ = [
    'KernelContext',
    'truncation_tail_bound',
    'PeriodicFunction',
    'SeparableFunction2',
    'MixingBound',
    'coalescence_probability',
    'density_upper_bound',
    'g',
    'g_envelope',
    'mixing_bound',
    'operator_norm_bound',
    'pair_correlation',
    'rho1',
    'rho2',
    'G_kernel',
    'G_tilde',
    'block_second_moment',
    'block_variance',
    'cov_zeta',
    'kernel_double_integral',
    'mean_block_integral',
    'sigma2',
    'expected_cluster_count',
    'expected_nu_integral',
    'gaussian_density',
    'q_density',
    'q_mass',
]
