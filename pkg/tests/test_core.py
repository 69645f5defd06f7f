import numpy as np
import pytest
from hypothesis import given, strategies as st

from longhop.core import (Collision, Constant, Custom, Hybrid, LinearScaled, Placement, PowerLaw,
                          decision_family, eval_decision, scenario_positions)

reals = st.floats(min_value=-5, max_value=5, allow_nan=False)


def families():
    base = st.one_of(
        st.floats(0, 1).map(Constant),
        st.floats(0, 60).map(PowerLaw),
        st.floats(0.01, 100).map(LinearScaled),
    )
    return st.one_of(base, st.tuples(base, base).map(lambda ab: Hybrid(*ab)))


def test_eval_examples():
    assert eval_decision(Constant(0.2), 5, 0.9) == 0.2
    assert eval_decision(PowerLaw(3), 0, 0.5) == 0.125
    hybrid = Hybrid(PowerLaw(9), Constant(0.1))
    assert eval_decision(hybrid, 0, 1.0) == 1.0
    assert eval_decision(hybrid, 1, 1.0) == 0.1


def test_distance_clamped_before_evaluation():
    assert PowerLaw(2)(1.3) == 1.0
    assert LinearScaled(2)(-0.5) == 0.0
    assert LinearScaled(0.5)(0.9) == 1.0  # result clamped too


@given(families(), st.integers(0, 20), reals)
def test_probability_bounds_and_purity(g, m, x):
    p = eval_decision(g, m, x)
    assert 0.0 <= p <= 1.0
    assert eval_decision(g, m, x) == p


@given(st.one_of(st.floats(0, 1).map(Constant), st.floats(0, 30).map(PowerLaw)),
       st.integers(0, 50), st.floats(0, 1))
def test_round_independent_families_ignore_m(g, m, x):
    assert g(x, m) == g(x, 0)


def test_array_evaluation_matches_scalar():
    g = PowerLaw(2.5)
    xs = np.linspace(-0.2, 1.2, 15)
    assert np.array_equal(g(xs), np.array([g(float(x)) for x in xs]))


def test_custom_wraps_callable():
    g = Custom(lambda x, m: x * 0 + 1.0 / (m + 2), name="decay")
    assert g(0.3, 0) == 0.5
    assert g(0.3, 2) == 0.25
    assert not g.round_independent


def test_constant_rejects_out_of_range():
    with pytest.raises(ValueError):
        Constant(1.5)


def test_scenarios():
    assert scenario_positions("uniform", 3).positions == (0.25, 0.5, 0.75)
    assert scenario_positions("unfavourable", 3).positions == (0.25, 0.25, 0.75)
    assert scenario_positions("favourable", 3).positions == (0.25, 0.75, 0.75)
    assert scenario_positions("favourable", 1).positions == (0.5,)
    with pytest.raises(ValueError):
        scenario_positions("uniform", 0)


@given(st.sampled_from(["uniform", "unfavourable", "favourable"]), st.integers(1, 300))
def test_scenarios_sized_and_bounded(kind, n):
    xs = scenario_positions(kind, n)
    assert xs.n == n
    assert all(0 <= x <= 1 for x in xs.positions)


def test_placement_validation():
    assert Placement((), 2.0).n == 0
    with pytest.raises(ValueError):
        Placement((2.5,), 2.0)
    with pytest.raises(ValueError):
        Placement((0.5,), 0.0)


def test_collision_needs_two():
    with pytest.raises(ValueError):
        Collision(1)


@pytest.mark.parametrize("spec, n, expected", [
    ("uniform", 4, Constant(0.25)),
    ("power", 10, PowerLaw(9)),
    ("power-n", 10, PowerLaw(10)),
    ("linear", 5, LinearScaled(5)),
    ("constant:0.3", 7, Constant(0.3)),
    ("power:2", 7, PowerLaw(2)),
    ("hybrid", 10, Hybrid(PowerLaw(9), Constant(0.1))),
    ("hybrid:0.2", 10, Hybrid(PowerLaw(9), Constant(0.2))),
    ("power", 0.5, PowerLaw(0)),
    ("uniform", 0.5, Constant(1.0)),
])
def test_decision_family(spec, n, expected):
    assert decision_family(spec, n) == expected


@pytest.mark.parametrize("spec", ["bogus", "constant", "power:x", "uniform:3"])
def test_decision_family_rejects(spec):
    with pytest.raises(ValueError):
        decision_family(spec, 4)
