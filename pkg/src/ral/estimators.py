"""scikit-learn style wrappers around the assignment routines.

An assignment "fit" consumes one square cost matrix; the fitted labels are
the column assigned to each row, mirroring ``labels_`` of a clusterer::

    >>> est = GreedyAssignment().fit([[5, 1], [9, 7]])
    >>> est.labels_.tolist(), est.value_
    ([0, 1], 12.0)
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .core import AssignmentResult, CostMatrix, DistributionKind
from .greedy import greedy_assign
from .solver import DEFAULT_LIMITS, SolverLimits, brute_force_max, hungarian_max, hungarian_min


def check_cost_matrix(X, dist_label: DistributionKind | None = None) -> CostMatrix:
    """Validate ``X`` as a finite, square, non-empty cost matrix."""
    if isinstance(X, CostMatrix):
        return X
    a = check_array(X, dtype=np.float64, ensure_all_finite=True, ensure_min_samples=1,
                    ensure_min_features=1, input_name="X")
    return CostMatrix(a, dist_label)


class _AssignmentEstimator(BaseEstimator):
    def _solve(self, m: CostMatrix) -> AssignmentResult:
        raise NotImplementedError

    def fit(self, X, y=None):
        m = check_cost_matrix(X)
        res = self._solve(m)
        self.result_ = res
        self.labels_ = res.perm.mapping.copy()
        self.value_ = res.value
        self.n_features_in_ = m.n
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_

    def score(self, X, y=None):
        """Value of the fitted permutation on ``X`` (same shape as the fit)."""
        check_is_fitted(self, "labels_")
        m = check_cost_matrix(X)
        if m.n != self.n_features_in_:
            raise ValueError(f"X is {m.n}x{m.n}, estimator was fitted on n={self.n_features_in_}")
        return float(np.sum(m.entries[np.arange(m.n), self.labels_]))


class GreedyAssignment(_AssignmentEstimator):
    """Row-by-row greedy maximization; ``marginals_`` holds the per-row picks."""

    def _solve(self, m):
        res = greedy_assign(m)
        self.marginals_ = res.extra["marginals"]
        return res


class ExactAssignment(_AssignmentEstimator):
    """Optimal assignment.

    Parameters
    ----------
    objective : {"max", "min"}
    method : {"hungarian", "brute_force"}
        Brute force enumerates all n! permutations (max only, small n).
    brute_force_max_n : int
    """

    def __init__(self, objective="max", method="hungarian", brute_force_max_n=8):
        self.objective = objective
        self.method = method
        self.brute_force_max_n = brute_force_max_n

    def _solve(self, m):
        if self.objective not in ("max", "min"):
            raise ValueError(f"objective must be 'max' or 'min', got {self.objective!r}")
        if self.method == "hungarian":
            return hungarian_max(m) if self.objective == "max" else hungarian_min(m)
        if self.method == "brute_force":
            limits = SolverLimits(self.brute_force_max_n) if self.brute_force_max_n != 8 else DEFAULT_LIMITS
            if self.objective == "max":
                return brute_force_max(m, limits)
            res = brute_force_max(-m, limits)
            return AssignmentResult(res.perm, -res.value, res.method)
        raise ValueError(f"unknown method {self.method!r}")
