import numpy as np
import pytest

from src.kernels.quadrature import diagonal_split_rule, gauss_legendre


def test_gauss_legendre_is_exact_for_polynomials():
    nodes, weights = gauss_legendre(8, -1.0, 3.0)
    assert np.dot(weights, nodes ** 15) == pytest.approx((3.0 ** 16 - 1.0) / 16, rel=1e-12)


def test_breakpoints_split_panels():
    nodes, weights = gauss_legendre(4, 0.0, 1.0, breakpoints=[0.5, 0.25, 2.0])
    assert nodes.size == 12
    assert weights.sum() == pytest.approx(1.0)
    # |x - 1/4| is integrated exactly once the kink is a panel edge
    assert np.dot(weights, np.abs(nodes - 0.25)) == pytest.approx(0.3125, abs=1e-14)


def test_diagonal_split_rule_covers_the_square():
    u, v, x, w = diagonal_split_rule(16)
    assert 2.0 * w.sum() == pytest.approx(1.0, abs=1e-14)
    assert np.sum(w * 2.0 * np.abs(u - v)) == pytest.approx(1.0 / 3.0, abs=1e-14)
    assert np.sum(w * (u * u * v + v * v * u)) == pytest.approx(1.0 / 6.0, abs=1e-14)
    assert np.allclose(u - v, x)
    with pytest.raises(ValueError):
        w[0, 0] = 1.0
