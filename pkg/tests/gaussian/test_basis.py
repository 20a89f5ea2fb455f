import numpy as np
import pytest

from src.core.exceptions import ConfigError
from src.gaussian.basis import BasisSpec


@pytest.mark.parametrize("family, size", [("trigonometric", 1), ("trigonometric", 17), ("haar", 16), ("haar", 11)])
def test_bases_are_orthonormal(family, size):
    basis = BasisSpec(family, size)
    assert np.allclose(basis.gram(), np.eye(size), atol=1e-10)


def test_family_aliases_and_labels():
    assert BasisSpec("trig", 4).family == "trigonometric"
    assert BasisSpec("fourier", 4).label == "trigonometric-4"


def test_bad_specs():
    with pytest.raises(ConfigError):
        BasisSpec("legendre", 4)
    with pytest.raises(ConfigError):
        BasisSpec("haar", 0)


def test_non_constant_elements_have_zero_mean():
    for family in ("trigonometric", "haar"):
        basis = BasisSpec(family, 8)
        nodes, weights = basis.quadrature()
        means = basis.evaluate(nodes) @ weights
        assert means[0] == pytest.approx(1.0)
        assert np.allclose(means[1:], 0.0, atol=1e-12)


def test_haar_cells():
    basis = BasisSpec("haar", 8)
    assert basis.piecewise_constant
    assert basis.cells == 8
    values = basis.cell_values()
    assert values.shape == (8, 8)
    assert np.allclose(values @ values.T / 8, np.eye(8))
