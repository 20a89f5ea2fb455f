import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from src.core.exceptions import SizeGuardError, UnsupportedOrderError
from src.measures.factorial import (
    conversion_coefficients,
    diagonal_collapse,
    factorial_integral,
    integer_partitions,
    moment_from_conversion,
    symmetrized,
    tensor_integral,
)
from src.measures.point_measure import PointMeasure, integrate

atom_sets = arrays(np.float64, st.integers(min_value=0, max_value=7),
                   elements=st.floats(min_value=-3.0, max_value=3.0), unique=True).map(np.sort)


def _F(*xs):
    out = np.ones_like(xs[0])
    for i, x in enumerate(xs, start=1):
        out = out * (1.0 + i * x)
    return out + sum(x * x for x in xs)


def _symmetric_F(*xs):
    prod = np.ones_like(xs[0])
    for x in xs:
        prod = prod * (1.0 + 0.5 * x)
    total = sum(xs)
    return prod + total * total + sum(x ** 3 for x in xs)


def test_constant_integrand_counts_tuples():
    N = PointMeasure([0.1, 0.2, 0.5, 0.9])
    one = lambda *xs: 1.0
    assert tensor_integral(N, one, 2) == 16.0
    assert factorial_integral(N, one, 2) == 12.0
    assert factorial_integral(N, one, 3) == 24.0
    assert factorial_integral(N, one, 4) == 24.0
    assert factorial_integral(PointMeasure([0.1, 0.2]), one, 3) == 0.0


def test_order_three_coefficients():
    table = conversion_coefficients(3)
    assert table.partitions == ((1, 1, 1), (1, 2), (3,))
    assert [table.A[p] for p in table.partitions] == [1, 3, 1]
    assert [table.a[p] for p in table.partitions] == [1, -3, 2]


def test_order_four_coefficients():
    table = conversion_coefficients(4)
    assert table.A == {(1, 1, 1, 1): 1, (1, 1, 2): 6, (1, 3): 4, (2, 2): 3, (4,): 1}
    assert table.a == {(1, 1, 1, 1): 1, (1, 1, 2): -6, (1, 3): 8, (2, 2): 3, (4,): -6}


def test_integer_partitions():
    assert integer_partitions(4) == [(1, 1, 1, 1), (1, 1, 2), (1, 3), (2, 2), (4,)]


@pytest.mark.parametrize("k", [0, 5])
def test_orders_outside_range(k):
    with pytest.raises(UnsupportedOrderError):
        conversion_coefficients(k)
    with pytest.raises(UnsupportedOrderError):
        tensor_integral(PointMeasure([0.0]), _F, k)


def test_size_guard():
    N = PointMeasure(np.arange(100.0))
    with pytest.raises(SizeGuardError):
        tensor_integral(N, _F, 4)


def test_diagonal_collapse_repeats_arguments():
    G = diagonal_collapse(lambda a, b, c: a * 100 + b * 10 + c, (1, 2))
    assert G(1, 2) == 122


@settings(max_examples=40, deadline=None)
@given(atoms=atom_sets, k=st.integers(min_value=1, max_value=4))
def test_conversions_hold_on_every_measure(atoms, k):
    N = PointMeasure(atoms)
    table = conversion_coefficients(k)
    tensor = tensor_integral(N, _symmetric_F, k)
    factorial = factorial_integral(N, _symmetric_F, k)
    scale = max(1.0, abs(tensor), abs(factorial))
    assert abs(tensor - table.tensor_from_factorial(N, _symmetric_F)) <= 1e-9 * scale
    assert abs(factorial - table.factorial_from_tensor(N, _symmetric_F)) <= 1e-9 * scale


@pytest.mark.parametrize("k", [2, 3, 4])
def test_conversions_accept_asymmetric_integrands(k):
    # (i,i,j), (i,j,i) and (j,i,i) collapse differently unless F is symmetrized
    N = PointMeasure([0.0, 1.0, 2.5])
    table = conversion_coefficients(k)
    tensor = tensor_integral(N, _F, k)
    factorial = factorial_integral(N, _F, k)
    assert table.tensor_from_factorial(N, _F) == pytest.approx(tensor, rel=1e-12)
    assert table.factorial_from_tensor(N, _F) == pytest.approx(factorial, rel=1e-12, abs=1e-9)


def test_symmetrization_keeps_the_integrals():
    N = PointMeasure([-0.5, 0.3, 1.2])
    S = symmetrized(_F, 3)
    assert float(S(0.1, 0.2, 0.7)) == pytest.approx(float(S(0.7, 0.1, 0.2)))
    assert tensor_integral(N, S, 3) == pytest.approx(tensor_integral(N, _F, 3))
    assert factorial_integral(N, S, 3) == pytest.approx(factorial_integral(N, _F, 3))


@settings(max_examples=40, deadline=None)
@given(atoms=atom_sets, k=st.integers(min_value=1, max_value=4))
def test_moment_expansion(atoms, k):
    N = PointMeasure(atoms)
    f = lambda x: 1.0 + np.sin(x)
    moment = integrate(N, f) ** k
    assert moment_from_conversion(N, f, k) == pytest.approx(moment, rel=1e-9, abs=1e-9)
