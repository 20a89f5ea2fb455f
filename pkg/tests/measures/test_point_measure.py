import math

import numpy as np
import pytest

from src.core.exceptions import ConfigError, WindowError
from src.kernels.covariance import mean_block_integral
from src.kernels.periodic import PeriodicFunction
from src.measures.point_measure import (
    MonotoneAtomMap,
    PointMeasure,
    block_integral,
    block_integrals,
    clt_statistic,
    integrate,
)


def test_atoms_must_be_strictly_increasing():
    with pytest.raises(ConfigError):
        PointMeasure([0.0, 0.0, 1.0])
    with pytest.raises(ConfigError):
        PointMeasure([1.0, 0.5])


def test_atoms_must_lie_in_the_window():
    with pytest.raises(ConfigError):
        PointMeasure([0.5, 2.5], (0.0, 2.0))
    with pytest.raises(ConfigError):
        PointMeasure([], (1.0, 0.0))


def test_atoms_are_read_only():
    N = PointMeasure([0.1, 0.2])
    with pytest.raises(ValueError):
        N.atoms[0] = 5.0


def test_constant_integrand_counts_atoms():
    N = PointMeasure([0.1, 0.7, 1.3])
    assert integrate(N, lambda x: 1.0) == 3.0
    assert integrate(PointMeasure([]), lambda x: 1.0) == 0.0


def test_blocks_are_half_open():
    f = PeriodicFunction.constant(1.0)
    N = PointMeasure([0.0, 0.5, 1.0, 1.5, 2.0], (0.0, 3.0))
    assert block_integral(N, f, 0) == 2.0
    assert block_integral(N, f, 1) == 2.0
    assert block_integral(N, f, 2) == 1.0
    assert np.array_equal(block_integrals(N, f, 0, 3), [2.0, 2.0, 1.0])


def test_block_outside_the_window():
    N = PointMeasure([0.5], (0.0, 1.0))
    with pytest.raises(WindowError):
        block_integral(N, PeriodicFunction.constant(1.0), 1)
    with pytest.raises(WindowError):
        block_integrals(N, PeriodicFunction.constant(1.0), 0, 2)


def test_block_integrals_sum_to_the_restricted_integral():
    rng = np.random.default_rng(3)
    N = PointMeasure(np.sort(rng.uniform(0.0, 10.0, 200)), (0.0, 10.0))
    f = PeriodicFunction.trig(2, "sin")
    blocks = block_integrals(N, f, 2, 5)
    inside = N.restrict(2.0, 7.0, closed=False)
    assert blocks.sum() == pytest.approx(integrate(inside, f), abs=1e-12)
    assert blocks[1] == pytest.approx(block_integral(N, f, 3), abs=1e-12)


def test_clt_statistic_centres_and_scales(ctx1):
    n = 16
    N = PointMeasure(np.arange(n) + 0.25, (0.0, float(n)))
    f = PeriodicFunction.hat(0.1, mass=0.5)
    expected = (n * float(f(0.25)) - n * mean_block_integral(ctx1, f)) / math.sqrt(n)
    assert clt_statistic(N, f, n, ctx1) == pytest.approx(expected, rel=1e-12)


def test_clt_statistic_needs_the_window(ctx1):
    N = PointMeasure([0.5], (0.0, 4.0))
    with pytest.raises(WindowError):
        clt_statistic(N, PeriodicFunction.trig(1), 8, ctx1)
    with pytest.raises(ConfigError):
        clt_statistic(N, PeriodicFunction.trig(1), 0, ctx1)


def test_monotone_map_validation():
    N = PointMeasure([0.0, 1.0, 2.0])
    MonotoneAtomMap(N, [5.0, 5.0, 6.0])
    with pytest.raises(ConfigError):
        MonotoneAtomMap(N, [5.0, 4.0, 6.0])
    with pytest.raises(ConfigError):
        MonotoneAtomMap(N, [5.0, 6.0])
