"""Exact linear assignment: brute-force enumeration and a shortest augmenting
path solver with dual potentials (Hungarian / Jonker-Volgenant family).
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numba
import numpy as np

from .core import AssignmentResult, CostMatrix, Method, Permutation, assignment_value
from .exceptions import SizeExceeded

SLACK_TOL = 1e-12
BRUTE_FORCE_CEILING = 10


@dataclass(frozen=True)
class SolverLimits:
    brute_force_max_n: int = 8

    def __post_init__(self):
        if not 1 <= self.brute_force_max_n <= BRUTE_FORCE_CEILING:
            raise ValueError(f"brute_force_max_n must be in [1, {BRUTE_FORCE_CEILING}]")


DEFAULT_LIMITS = SolverLimits()


def _entries(m) -> np.ndarray:
    a = m.entries if isinstance(m, CostMatrix) else np.asarray(m, dtype=np.float64)
    return np.ascontiguousarray(a, dtype=np.float64)


@functools.lru_cache(maxsize=BRUTE_FORCE_CEILING)
def _all_permutations(n: int) -> np.ndarray:
    # itertools yields lexicographic order
    return np.array(list(itertools.permutations(range(n))), dtype=np.int8).reshape(-1, n)


@numba.njit(cache=True)
def _brute_kernel(a, perms):
    n = a.shape[0]
    best = -np.inf
    best_k = 0
    for k in range(perms.shape[0]):
        s = 0.0
        for i in range(n):
            s += a[i, perms[k, i]]
        if s > best:
            best = s
            best_k = k
    return best_k


def brute_force_max(m: CostMatrix, limits: SolverLimits = DEFAULT_LIMITS) -> AssignmentResult:
    """Maximum over all n! permutations; ties go to the lexicographically
    smallest permutation."""
    a = _entries(m)
    n = a.shape[0]
    if n > limits.brute_force_max_n:
        raise SizeExceeded(f"brute force limited to n <= {limits.brute_force_max_n}, got n={n}")
    perms = _all_permutations(n)
    k = _brute_kernel(a, perms)
    perm = Permutation(perms[k].astype(np.int64))
    return AssignmentResult(perm, assignment_value(a, perm), Method.BRUTE_FORCE)


@numba.njit(cache=True)
def _lap_min_kernel(a, tol):
    # Rows are added one at a time; each addition grows a shortest-path tree
    # over reduced costs a[i, j] - u[i] - v[j] until a free column is reached.
    # Index 0 is a virtual column; rows/columns are 1-based inside.
    n = a.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    row_of = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    minv = np.empty(n + 1)
    used = np.empty(n + 1, dtype=np.bool_)
    for i in range(1, n + 1):
        row_of[0] = i
        j0 = 0
        minv[:] = np.inf
        used[:] = False
        while True:
            used[j0] = True
            i0 = row_of[j0]
            delta = np.inf
            for j in range(1, n + 1):
                if not used[j]:
                    cur = a[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
            # among columns tight within tol, prefer an unassigned one
            j1 = -1
            for j in range(1, n + 1):
                if not used[j] and minv[j] <= delta + tol:
                    if j1 < 0:
                        j1 = j
                    if row_of[j] == 0:
                        j1 = j
                        break
            for j in range(n + 1):
                if used[j]:
                    u[row_of[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if row_of[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            row_of[j0] = row_of[j1]
            j0 = j1
    col_of = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        col_of[row_of[j] - 1] = j - 1
    return col_of


def hungarian_min(m: CostMatrix) -> AssignmentResult:
    """Exact minimum-cost perfect matching, O(n^3)."""
    a = _entries(m)
    perm = Permutation(_lap_min_kernel(a, SLACK_TOL))
    return AssignmentResult(perm, assignment_value(a, perm), Method.HUNGARIAN)


def hungarian_max(m: CostMatrix) -> AssignmentResult:
    """Exact maximizer, solved as the minimum of the negated matrix."""
    a = _entries(m)
    res = hungarian_min(-a)
    return AssignmentResult(res.perm, -res.value, Method.HUNGARIAN)
