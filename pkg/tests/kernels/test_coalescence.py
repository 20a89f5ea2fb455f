import math

import numpy as np
import pytest

from src.core.exceptions import DomainError
from src.kernels.coalescence import (
    expected_cluster_count,
    expected_nu_integral,
    gaussian_density,
    q_density,
    q_mass,
)
from src.kernels.densities import coalescence_probability


@pytest.mark.parametrize("s, a, b", [(1.0, 0.0, 0.5), (1.0, -1.0, 1.0), (0.3, 2.0, 2.1), (4.0, 0.0, 6.0)])
def test_q_mass_is_the_coalescence_probability(s, a, b):
    assert float(q_mass(s, a, b)[0]) == pytest.approx(float(coalescence_probability(s, b - a)), rel=1e-6)


def test_q_mass_of_distant_or_merged_starts():
    s = 0.5
    far, merged = q_mass(s, [0.0, 1.0], [10.0 * math.sqrt(s), 1.0])
    assert far <= 1e-8
    assert merged == pytest.approx(1.0, rel=1e-12)


def test_q_is_dominated_by_both_marginals():
    s = 1.0
    u = np.linspace(-6.0, 7.0, 131)
    q = q_density(s, 0.0, 1.0, u)
    bound = np.minimum(gaussian_density(s, 0.0, u), gaussian_density(s, 1.0, u))
    assert np.all(q >= 0.0)
    assert np.max(q - bound) <= 1e-8


def test_q_for_a_single_start_is_gaussian():
    u = np.linspace(-3.0, 3.0, 13)
    assert np.allclose(q_density(0.5, 0.2, 0.2, u), gaussian_density(0.5, 0.2, u))


def test_q_is_translation_invariant():
    u = np.linspace(-2.0, 3.0, 11)
    assert np.allclose(q_density(1.0, 0.0, 1.0, u), q_density(1.0, 10.0, 11.0, u + 10.0), atol=1e-10)


def test_q_domain_errors():
    with pytest.raises(DomainError):
        q_density(0.0, 0.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        q_density(1.0, 1.0, 0.0, 0.5)


def test_expected_cluster_count():
    atoms = [0.0, 0.5, 3.0]
    expected = 3 - math.erfc(0.5 / 2.0) - math.erfc(2.5 / 2.0)
    assert expected_cluster_count(atoms, 1.0) == pytest.approx(expected)
    assert expected_cluster_count([], 1.0) == 0.0


def test_expected_nu_mass_counts_clusters():
    atoms = [0.0, 0.4, 1.5, 1.6, 4.0]
    one = lambda v: np.ones_like(v)
    assert expected_nu_integral(atoms, one, 1.0) == pytest.approx(expected_cluster_count(atoms, 1.0), rel=1e-5)


def test_alternating_series_terminates_at_the_atom_count():
    atoms = [0.0, 0.3, 0.9, 1.2]
    f = lambda v: np.cos(v) + 0.1 * v
    full = expected_nu_integral(atoms, f, 0.7)
    assert expected_nu_integral(atoms, f, 0.7, max_order=len(atoms)) == pytest.approx(full, abs=1e-10)
    first = expected_nu_integral(atoms, f, 0.7, max_order=1)
    assert first != pytest.approx(full, abs=1e-6)
