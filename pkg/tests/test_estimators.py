import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ral.core import CostMatrix
from ral.estimators import ExactAssignment, GreedyAssignment, check_cost_matrix


def test_check_cost_matrix():
    m = check_cost_matrix([[1, 2], [3, 4]])
    assert isinstance(m, CostMatrix) and m.n == 2
    with pytest.raises(ValueError):
        check_cost_matrix([[1, np.inf], [0, 0]])
    with pytest.raises(ValueError):
        check_cost_matrix([[1, 2, 3], [4, 5, 6]])


def test_greedy_estimator():
    est = GreedyAssignment().fit([[5, 1], [9, 7]])
    assert est.labels_.tolist() == [0, 1]
    assert est.value_ == 12.0
    assert est.marginals_.tolist() == [5.0, 7.0]
    assert est.score([[5, 1], [9, 7]]) == 12.0


def test_exact_estimator_params_and_clone():
    est = ExactAssignment(objective="min")
    assert est.get_params() == {"objective": "min", "method": "hungarian", "brute_force_max_n": 8}
    c = clone(est).set_params(objective="max")
    assert c.fit_predict([[2, 1], [9, 0]]).tolist() == [1, 0]
    assert c.value_ == 10.0
    assert est.fit([[2, 1], [9, 0]]).value_ == 2.0


@pytest.mark.parametrize("objective", ["max", "min"])
def test_brute_and_hungarian_agree(objective, rng):
    a = rng.standard_normal((6, 6))
    h = ExactAssignment(objective=objective).fit(a).value_
    b = ExactAssignment(objective=objective, method="brute_force").fit(a).value_
    assert h == pytest.approx(b, abs=1e-9)


def test_errors():
    with pytest.raises(NotFittedError):
        GreedyAssignment().score([[1.0]])
    with pytest.raises(ValueError):
        ExactAssignment(objective="sideways").fit([[1.0]])
    with pytest.raises(ValueError):
        GreedyAssignment().fit(np.eye(3)).score(np.eye(2))
