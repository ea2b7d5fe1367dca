"""
Tests for weight models and the C-benevolence check.
"""

import math
from fractions import Fraction as F

import pytest

from core.errors import MalformedInputError, ParameterError
from core.weights import WeightModel, check_c_benevolent, make_grid, total_weight, weight_of


def test_weight_of_each_model():
    assert weight_of(WeightModel.proportional(), F(3, 2)) == F(3, 2)
    assert weight_of(WeightModel.unweighted(), F(3, 2)) == 1
    assert weight_of(WeightModel.power(2), 3) == pytest.approx(9.0)


@pytest.mark.parametrize("p", [0, F(-1, 2)])
def test_weight_of_rejects_nonpositive(p):
    with pytest.raises(ParameterError):
        weight_of(WeightModel.proportional(), p)


def test_total_weight_is_exact_for_proportional():
    assert total_weight(WeightModel.proportional(), [F(1, 3), F(2, 3)]) == 1


def test_weight_model_validation():
    with pytest.raises(ParameterError):
        WeightModel.power(0.5)
    with pytest.raises(ParameterError):
        WeightModel.power(float("inf"))
    with pytest.raises(ParameterError):
        WeightModel("unweighted", 2.0)
    with pytest.raises(ParameterError):
        WeightModel("quadratic")


def test_power_weights_are_c_benevolent():
    assert check_c_benevolent(WeightModel.power(2), make_grid(50, 5)) == []


def test_adversary_exponent_is_c_benevolent():
    k = math.log(100) / math.log(1.8)
    assert check_c_benevolent(WeightModel.power(k), make_grid(100, 5, seed=7)) == []


def test_concave_function_breaks_exchange_condition():
    violations = check_c_benevolent(lambda p: float(p) ** 0.5, [(1, 1, F(1, 2))])
    assert [v.condition for v in violations] == ["C2"]


def test_unweighted_is_not_c_benevolent():
    violations = check_c_benevolent(WeightModel.unweighted(), [(1, 2, F(1, 2))])
    conditions = {v.condition for v in violations}
    assert "C1" in conditions
    assert "C3" in conditions


def test_offset_function_fails_zero_condition():
    violations = check_c_benevolent(lambda p: float(p) + 1, [(1, 2, F(1, 2))])
    assert [v.condition for v in violations] == ["C1"]


def test_grid_errors():
    with pytest.raises(MalformedInputError):
        check_c_benevolent(WeightModel.power(2), [])
    with pytest.raises(MalformedInputError):
        check_c_benevolent(WeightModel.power(2), [(1, 2, 3)])


def test_make_grid_is_deterministic_and_valid():
    grid = make_grid(20, 5, seed=3)
    assert grid == make_grid(20, 5, seed=3)
    assert len(grid) == 20
    for p1, p2, eps in grid:
        assert 0 < eps <= p1 <= p2 <= 5
