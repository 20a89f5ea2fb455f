import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.special import erfc

from src.core.exceptions import TruncationError
from src.kernels.context import KernelContext, truncation_tail_bound
from src.kernels.covariance import (
    G_kernel,
    G_tilde,
    block_second_moment,
    block_variance,
    cov_zeta,
    kernel_double_integral,
    kernel_of_difference,
    mean_block_integral,
    sigma2,
    symmetric_kernel_of_difference,
)
from src.kernels.densities import rho1
from src.kernels.periodic import PeriodicFunction, SeparableFunction2


def test_adaptive_truncation_meets_tolerance():
    for t in (0.1, 1.0, 5.0):
        ctx = KernelContext.adaptive(t)
        assert ctx.is_valid
        assert ctx.tail_bound <= 1e-10
        if ctx.series_truncation_L > 1:
            assert truncation_tail_bound(t, ctx.series_truncation_L - 1) > 1e-10


def test_short_truncation_is_rejected():
    ctx = KernelContext(t=50.0, series_truncation_L=1)
    assert not ctx.is_valid
    with pytest.raises(TruncationError):
        kernel_of_difference(ctx, 0.2)


def test_with_time_rechooses_truncation(ctx1):
    later = ctx1.with_time(9.0)
    assert later.t == 9.0
    assert later.series_truncation_L > ctx1.series_truncation_L
    assert later.abs_tol == ctx1.abs_tol


def test_G_grid_is_symmetric(ctx1):
    v = (np.arange(64) + 0.5) / 64
    x, y = np.meshgrid(v, v, indexing="ij")
    values = G_tilde(ctx1, x, y)
    assert np.max(np.abs(values - values.T)) <= 1e-14


def test_symmetric_kernel_is_the_average_of_both_orders(ctx1):
    x = np.linspace(-1.0, 1.0, 41)
    averaged = 0.5 * (kernel_of_difference(ctx1, x) + kernel_of_difference(ctx1, -x))
    assert np.allclose(symmetric_kernel_of_difference(ctx1, x), averaged, atol=1e-14)
    assert np.allclose(G_kernel(ctx1, 0.7, 0.2), kernel_of_difference(ctx1, 0.5))


def test_symmetric_integrand_sees_the_same_kernel(ctx1):
    f2 = SeparableFunction2.product(PeriodicFunction.trig(1), PeriodicFunction.trig(2, "sin"))
    assert kernel_double_integral(ctx1, f2) == pytest.approx(
        kernel_double_integral(ctx1, f2, symmetric=True), abs=1e-12)


def _cos_overlap(x):
    """∫ cos(2π(v + x)) cos(2πv) dv over the v with v, v + x in [0, 1]"""
    return 0.5 * (1 - abs(x)) * math.cos(2 * math.pi * x) - math.sin(2 * math.pi * abs(x)) / (4 * math.pi)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_sigma2_matches_one_dimensional_reduction(t):
    ctx = KernelContext.adaptive(t)
    f = PeriodicFunction.trig(1)
    reduced, _ = integrate.quad(lambda x: float(kernel_of_difference(ctx, x)) * _cos_overlap(x),
                                -1.0, 1.0, points=[0.0], epsabs=1e-13, epsrel=1e-12, limit=200)
    expected = reduced + 0.5 * rho1(ctx)
    assert sigma2(ctx, f) == pytest.approx(expected, rel=1e-8)
    assert sigma2(ctx, f) > 0.0


def test_cov_zeta_is_symmetric_and_bilinear(ctx1):
    f = PeriodicFunction.trig(1)
    h = PeriodicFunction.hat(0.1, zero_mean=True)
    assert cov_zeta(ctx1, f, h) == pytest.approx(cov_zeta(ctx1, h, f), abs=1e-14)
    assert cov_zeta(ctx1, f.scaled(2.0), h) == pytest.approx(2.0 * cov_zeta(ctx1, f, h), rel=1e-12, abs=1e-14)
    assert cov_zeta(ctx1, f, f) == pytest.approx(sigma2(ctx1, f), abs=1e-15)


def test_block_moments_differ_by_the_squared_mean(ctx1):
    f = PeriodicFunction.hat(0.1, mass=0.5)
    mean = mean_block_integral(ctx1, f)
    assert mean == pytest.approx(0.5 * rho1(ctx1), rel=1e-12)
    assert block_second_moment(ctx1, f) - block_variance(ctx1, f) == pytest.approx(mean * mean, rel=1e-5)
    assert block_variance(ctx1, f) > 0.0


def test_G_on_the_diagonal_is_stable_in_the_truncation():
    short = KernelContext(t=1.0, series_truncation_L=10)
    long = KernelContext(t=1.0, series_truncation_L=50)
    assert abs(float(G_kernel(short, 0.0, 0.0)) - float(G_kernel(long, 0.0, 0.0))) <= 1e-10


def _g_by_erfc(t, x):
    """g_t from the erfc form of the pair density, without the scaled erfc"""
    a = abs(x) / (2.0 * math.sqrt(t))
    return (a * math.sqrt(math.pi) * math.exp(-a * a) * erfc(a) - math.exp(-2.0 * a * a)) / (math.pi * t)


def test_G_matches_long_direct_summation():
    t, x = 2.0, 0.2 - 0.8
    reference = _g_by_erfc(t, x) + 2.0 * math.fsum(_g_by_erfc(t, x + l) for l in range(1, 201))
    ctx = KernelContext.adaptive(t, quad_points=256)
    assert float(G_kernel(ctx, 0.2, 0.8)) == pytest.approx(reference, abs=1e-9)


def test_sigma2_of_zero_is_zero(ctx1):
    assert sigma2(ctx1, PeriodicFunction.constant(0.0)) == pytest.approx(0.0, abs=1e-15)
    assert sigma2(ctx1, PeriodicFunction.trig(1, scale=0.0)) == pytest.approx(0.0, abs=1e-15)


def test_sigma2_is_quadratic_in_the_scale(ctx1):
    hat = PeriodicFunction.hat(0.2)
    assert sigma2(ctx1, hat.scaled(3.0)) == pytest.approx(9.0 * sigma2(ctx1, hat), rel=1e-12)


table_values = st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=2, max_size=12)


@settings(max_examples=40, deadline=None)
@given(values=table_values, t=st.floats(min_value=0.1, max_value=5.0))
def test_sigma2_is_nonnegative_on_tables(values, t):
    ctx = KernelContext.adaptive(t)
    f = PeriodicFunction.from_table(values + values[:1])
    assert sigma2(ctx, f) >= -ctx.abs_tol


@settings(max_examples=40, deadline=None)
@given(k=st.integers(min_value=0, max_value=6),
       phase=st.sampled_from(["cos", "sin"]),
       scale=st.floats(min_value=-3.0, max_value=3.0),
       margin=st.floats(min_value=0.0, max_value=0.4))
def test_sigma2_is_nonnegative_on_trig_and_hat(ctx1, k, phase, scale, margin):
    assert sigma2(ctx1, PeriodicFunction.trig(k, phase, scale)) >= -ctx1.abs_tol
    assert sigma2(ctx1, PeriodicFunction.hat(margin, scale=scale)) >= -ctx1.abs_tol
    assert sigma2(ctx1, PeriodicFunction.hat(margin, zero_mean=True, scale=scale)) >= -ctx1.abs_tol
