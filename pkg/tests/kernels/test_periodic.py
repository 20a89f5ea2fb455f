import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.exceptions import ConfigError
from src.kernels.periodic import PeriodicFunction, SeparableFunction2

FUNCTIONS = [
    PeriodicFunction.trig(1),
    PeriodicFunction.trig(3, "sin", scale=2.0),
    PeriodicFunction.constant(1.5),
    PeriodicFunction.hat(0.1, mass=0.5),
    PeriodicFunction.hat(0.2, zero_mean=True),
    PeriodicFunction.from_table([0.0, 1.0, -1.0, 0.0]),
]


@pytest.mark.parametrize("f", FUNCTIONS, ids=lambda f: f.label)
@settings(max_examples=30, deadline=None)
@given(x=st.floats(min_value=-50.0, max_value=50.0), shift=st.integers(min_value=-5, max_value=5))
def test_functions_are_one_periodic(f, x, shift):
    assert float(f(x + shift)) == pytest.approx(float(f(x)), abs=1e-9)


@pytest.mark.parametrize("f", FUNCTIONS, ids=lambda f: f.label)
def test_spec_round_trip(f):
    rebuilt = PeriodicFunction.from_spec(f.to_spec())
    x = np.linspace(0.0, 1.0, 101)
    assert np.allclose(rebuilt(x), f(x))
    assert rebuilt.zero_mean == f.zero_mean


def test_integrals():
    assert PeriodicFunction.trig(2).integral() == pytest.approx(0.0, abs=1e-14)
    assert PeriodicFunction.hat(0.1, mass=0.5).integral() == pytest.approx(0.5, rel=1e-12)
    assert PeriodicFunction.trig(1).l2_inner(PeriodicFunction.trig(1)) == pytest.approx(0.5)
    assert PeriodicFunction.trig(1).l2_inner(PeriodicFunction.trig(1, "sin")) == pytest.approx(0.0, abs=1e-14)


def test_declared_flags_are_validated():
    PeriodicFunction.hat(0.2, zero_mean=True).validate(1e-10)
    PeriodicFunction.hat(0.1, mass=0.5).validate(1e-10)
    with pytest.raises(ConfigError):
        PeriodicFunction.from_table([0.0, 1.0, 0.0], zero_mean=True).validate(1e-10)


@pytest.mark.parametrize("spec", [
    {"kind": "spline"},
    {"kind": "trig"},
    {"kind": "trig", "k": 1, "phase": "tan"},
    {"kind": "hat", "margin": 0.6},
    {"kind": "table", "values": [0.0, 1.0]},
    {"kind": "constant", "value": 1.0, "colour": "red"},
    {"kind": "hat", "margin": 0.1, "mass": 0.5, "zero_mean": True},
])
def test_bad_specs_are_config_errors(spec):
    with pytest.raises(ConfigError):
        PeriodicFunction.from_spec(spec)


def test_two_variable_function_is_symmetric():
    f2 = SeparableFunction2.from_spec({"terms": [
        {"weight": 2.0, "x": {"kind": "trig", "k": 1}, "y": {"kind": "trig", "k": 2, "phase": "sin"}},
        {"x": {"kind": "trig", "k": 3}},
    ]})
    x, y = np.meshgrid(np.linspace(0, 1, 9), np.linspace(0, 1, 7))
    assert np.allclose(f2(x, y), f2(y, x))
    assert f2.zero_marginals
    assert not SeparableFunction2.product(PeriodicFunction.constant(1.0)).zero_marginals
    assert SeparableFunction2.product(PeriodicFunction.trig(1)).diagonal_integral() == pytest.approx(0.5)


def test_bad_two_variable_term():
    with pytest.raises(ConfigError):
        SeparableFunction2.from_spec({"terms": [{"y": {"kind": "trig", "k": 1}}]})
