"""Greedy row-by-row maximization.

Row ``i`` (in natural order) takes the largest entry among the columns not
yet used by rows ``0..i-1``; ties go to the smallest column index.
"""
from __future__ import annotations

import math

import numba
import numpy as np

from .core import AssignmentResult, CostMatrix, Method, Permutation


@numba.njit(cache=True)
def _greedy_kernel(a):
    n = a.shape[0]
    used = np.zeros(n, dtype=np.bool_)
    perm = np.empty(n, dtype=np.int64)
    picks = np.empty(n, dtype=np.float64)
    for i in range(n):
        best = -np.inf
        bj = -1
        for j in range(n):
            if not used[j] and (bj < 0 or a[i, j] > best):
                best = a[i, j]
                bj = j
        used[bj] = True
        perm[i] = bj
        picks[i] = best
    return perm, picks


@numba.njit(cache=True)
def _greedy_stream_kernel(rng, n):
    # Same row-major polar-method sequence as sampling._polar_fill, consumed
    # one row at a time so the n x n matrix is never stored.
    used = np.zeros(n, dtype=np.bool_)
    perm = np.empty(n, dtype=np.int64)
    picks = np.empty(n, dtype=np.float64)
    have_spare = False
    spare = 0.0
    for i in range(n):
        best = -np.inf
        bj = -1
        for j in range(n):
            if have_spare:
                x = spare
                have_spare = False
            else:
                while True:
                    v1 = 2.0 * rng.random() - 1.0
                    v2 = 2.0 * rng.random() - 1.0
                    s = v1 * v1 + v2 * v2
                    if s < 1.0 and s != 0.0:
                        break
                f = np.sqrt(-2.0 * np.log(s) / s)
                x = v1 * f
                spare = v2 * f
                have_spare = True
            if not used[j] and (bj < 0 or x > best):
                best = x
                bj = j
        used[bj] = True
        perm[i] = bj
        picks[i] = best
    return perm, picks


def _result(perm: np.ndarray, picks: np.ndarray) -> AssignmentResult:
    return AssignmentResult(Permutation(perm), math.fsum(picks), Method.GREEDY, {"marginals": picks})


def greedy_assign(m: CostMatrix) -> AssignmentResult:
    """Greedy permutation and its value ``S(pi*)``.

    The value is the correctly rounded sum of the per-row picks and hence
    equals ``assignment_value(m, result.perm)`` exactly.
    """
    perm, picks = _greedy_kernel(np.ascontiguousarray(m.entries if isinstance(m, CostMatrix) else m, dtype=np.float64))
    return _result(perm, picks)


def greedy_marginals(m: CostMatrix) -> np.ndarray:
    """Per-row picks ``X[i, pi*(i)]``; row ``i`` is a max over ``n - i`` columns."""
    return greedy_assign(m).extra["marginals"]


def greedy_gaussian_stream(rng: np.random.Generator, n: int) -> AssignmentResult:
    """Greedy on the Gaussian matrix ``gen_matrix`` would build from ``rng``.

    Bit-identical to ``greedy_assign(gen_matrix(n, GAUSSIAN, seed))`` for a
    fresh stream, but O(n) memory.
    """
    perm, picks = _greedy_stream_kernel(rng, int(n))
    return _result(perm, picks)
