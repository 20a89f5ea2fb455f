import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.exceptions import ConfigError, SizeGuardError
from src.kernels.coalescence import gaussian_density, q_density
from src.measures.point_measure import MonotoneAtomMap, PointMeasure
from src.measures.web_calculus import (
    inclusion_exclusion_eval,
    level_sets,
    mu_k_phi,
    nu_measure,
    xi_process,
)


def _clustered(sizes, images):
    atoms = np.arange(sum(sizes), dtype=float) * 0.1
    return MonotoneAtomMap(PointMeasure(atoms), np.repeat(images, sizes))


clusterings = st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=5).map(
    lambda sizes: _clustered(sizes, np.arange(len(sizes), dtype=float) * 1.7 - 2.0))


def test_level_sets_and_nu():
    phi = _clustered([3, 1, 2], [0.5, 1.0, 4.0])
    levels = level_sets(phi)
    assert [lv.image for lv in levels] == [0.5, 1.0, 4.0]
    assert [lv.size for lv in levels] == [3, 1, 2]
    assert np.array_equal(nu_measure(phi.domain, phi).atoms, [0.5, 1.0, 4.0])


def test_mu_k_counts_ordered_tuples_per_level_set():
    phi = _clustered([3, 1, 2], [0.5, 1.0, 4.0])
    assert mu_k_phi(phi.domain, phi, 1).as_dict() == {0.5: 3, 1.0: 1, 4.0: 2}
    assert mu_k_phi(phi.domain, phi, 2).as_dict() == {0.5: 6, 4.0: 2}
    assert mu_k_phi(phi.domain, phi, 3).as_dict() == {0.5: 6}
    assert mu_k_phi(phi.domain, phi, 4).total_mass == 0


@settings(max_examples=40, deadline=None)
@given(phi=clusterings, k=st.integers(min_value=1, max_value=4))
def test_level_set_and_enumeration_agree(phi, k):
    fast = mu_k_phi(phi.domain, phi, k)
    slow = mu_k_phi(phi.domain, phi, k, method="enumerate")
    assert fast.as_dict() == slow.as_dict()


@settings(max_examples=40, deadline=None)
@given(phi=clusterings, freq=st.floats(min_value=0.1, max_value=3.0))
def test_inclusion_exclusion_is_exact(phi, freq):
    lhs, rhs = inclusion_exclusion_eval(phi.domain, phi, lambda y: np.cos(freq * y) + 0.5 * y)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


def test_map_must_match_the_measure():
    phi = _clustered([2, 2], [0.0, 1.0])
    other = PointMeasure([0.0, 0.1, 0.2, 0.35])
    with pytest.raises(ConfigError):
        nu_measure(other, phi)
    with pytest.raises(ConfigError):
        mu_k_phi(phi.domain, phi, 2, method="guess")


def test_mu_k_size_guard():
    atoms = np.arange(200, dtype=float)
    phi = MonotoneAtomMap(PointMeasure(atoms), atoms)
    with pytest.raises(SizeGuardError):
        mu_k_phi(phi.domain, phi, 4)


def test_xi_one_is_a_sum_of_gaussians():
    N = PointMeasure([-1.0, 0.0, 2.0])
    s, v = 0.5, 0.3
    expected = float(gaussian_density(s, N.atoms, v).sum())
    assert xi_process(N, 1, s, v, cutoff=8.0 * math.sqrt(s)) == pytest.approx(expected)


def test_xi_two_counts_both_orders():
    N = PointMeasure([0.0, 0.4])
    s, v = 1.0, 0.2
    expected = 2.0 * float(q_density(s, 0.0, 0.4, v))
    assert xi_process(N, 2, s, v, cutoff=8.0) == pytest.approx(expected, rel=1e-12)
    assert xi_process(PointMeasure([0.0]), 2, s, v, cutoff=8.0) == 0.0


def test_xi_rejects_bad_order_and_cutoff():
    N = PointMeasure([0.0])
    with pytest.raises(ConfigError):
        xi_process(N, 3, 1.0, 0.0, cutoff=8.0)
    with pytest.raises(ConfigError):
        xi_process(N, 1, 1.0, 0.0, cutoff=7.9)
