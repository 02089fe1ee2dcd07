import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linear_sum_assignment

from ral.core import CostMatrix, Method, Permutation, assignment_value
from ral.exceptions import SizeExceeded
from ral.greedy import greedy_assign
from ral.solver import SolverLimits, brute_force_max, hungarian_max, hungarian_min


def test_brute_force_tie_is_lexicographic():
    res = brute_force_max(CostMatrix([[1, 2], [3, 4]]))
    assert res.value == 5.0
    assert res.perm == Permutation.from_one_based([1, 2])
    assert res.method is Method.BRUTE_FORCE


def test_brute_force_examples():
    res = brute_force_max(CostMatrix([[2, 1], [9, 0]]))
    assert res.perm == Permutation.from_one_based([2, 1]) and res.value == 10.0
    one = brute_force_max(CostMatrix([[4.5]]))
    assert one.perm == Permutation.identity(1) and one.value == 4.5


def test_brute_force_size_guard():
    with pytest.raises(SizeExceeded):
        brute_force_max(CostMatrix(np.zeros((9, 9))))
    res = brute_force_max(CostMatrix(np.eye(9)), SolverLimits(9))
    assert res.value == 9.0
    with pytest.raises(ValueError):
        SolverLimits(11)


def test_hungarian_examples():
    m = CostMatrix([[2, 1], [9, 0]])
    lo = hungarian_min(m)
    assert lo.perm == Permutation.from_one_based([1, 2]) and lo.value == 2.0
    assert hungarian_max(m).value == 10.0
    assert lo.method is Method.HUNGARIAN


def test_hungarian_min_matches_brute_force_6x6():
    r = np.random.default_rng(6)
    for a in r.standard_normal((1000, 6, 6)):
        assert abs(hungarian_min(a).value - (-brute_force_max(-a).value)) <= 1e-9


def test_hungarian_max_matches_brute_force_7x7(gaussian_7x7_batch):
    for m in gaussian_7x7_batch:
        hm = hungarian_max(m)
        assert abs(hm.value - brute_force_max(m).value) <= 1e-9
        assert hm.value == -hungarian_min(-m).value


def test_constant_row_decomposes():
    r = np.random.default_rng(1)
    a = r.standard_normal((6, 6))
    c = 2.75
    a[3, :] = c
    sub = np.delete(a, 3, axis=0)
    # with a constant row, the optimum is c plus the best 5-row choice of 5 of 6 columns
    best_sub = min(
        hungarian_min(np.delete(sub, j, axis=1)).value for j in range(6)
    )
    assert hungarian_min(a).value == pytest.approx(c + best_sub, abs=1e-12)


def test_dominant_diagonal():
    r = np.random.default_rng(2)
    n = 40
    a = r.random((n, n))
    np.fill_diagonal(a, 100.0)
    res = hungarian_max(a)
    assert res.perm == Permutation.identity(n)
    assert res.value == pytest.approx(100.0 * n)


@pytest.mark.parametrize("n", [1, 2, 3, 10, 57, 200])
def test_agrees_with_scipy(n):
    r = np.random.default_rng(n)
    for _ in range(20):
        a = r.standard_normal((n, n))
        rows, cols = linear_sum_assignment(a)
        assert hungarian_min(a).value == pytest.approx(a[rows, cols].sum(), abs=1e-9)
        rows, cols = linear_sum_assignment(a, maximize=True)
        assert hungarian_max(a).value == pytest.approx(a[rows, cols].sum(), abs=1e-9)


def test_degenerate_integer_costs():
    r = np.random.default_rng(4)
    for _ in range(200):
        a = r.integers(0, 3, (8, 8)).astype(float)
        assert hungarian_max(a).value == brute_force_max(a).value


matrices = st.integers(1, 7).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-50, 50, allow_nan=False))
)


@settings(max_examples=150, deadline=None)
@given(a=matrices, row=st.integers(0, 6), c=st.floats(-10, 10))
def test_row_shift_invariance(a, row, c):
    n = a.shape[0]
    row %= n
    base = hungarian_max(a)
    b = a.copy()
    b[row] += c
    shifted = hungarian_max(b)
    assert shifted.value == pytest.approx(base.value + c, abs=1e-9)
    # the old optimum is still optimal after the shift
    assert assignment_value(b, base.perm) == pytest.approx(shifted.value, abs=1e-9)


@settings(max_examples=150, deadline=None)
@given(a=matrices)
def test_max_dominates_greedy_and_matches_brute(a):
    hm = hungarian_max(a)
    assert hm.value >= greedy_assign(a).value - 1e-9
    assert hm.value == pytest.approx(brute_force_max(a).value, abs=1e-9)
    assert hm.value == -hungarian_min(-a).value
