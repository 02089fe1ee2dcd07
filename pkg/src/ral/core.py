"""Cost matrices, permutations and assignment values.

Permutations are stored 0-based internally (``mapping[i]`` is the column
assigned to row ``i``); everything serialized to text is 1-based.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionMismatch, InvalidSize


class DistributionKind(str, enum.Enum):
    """Law of the i.i.d. matrix entries."""

    GAUSSIAN = "gaussian"  # N(0, 1)
    EXPONENTIAL = "exp"  # Exp(1)
    UNIFORM = "uniform"  # U(0, 1)


class Method(str, enum.Enum):
    GREEDY = "greedy"
    HUNGARIAN = "hungarian"
    BRUTE_FORCE = "brute_force"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Dense n x n matrix of finite real costs, read-only after construction."""

    entries: np.ndarray
    dist_label: DistributionKind | None = None

    def __post_init__(self):
        a = np.array(self.entries, dtype=np.float64, order="C", copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"cost matrix must be square, got shape {a.shape}")
        if a.shape[0] < 1:
            raise InvalidSize("cost matrix must have n >= 1")
        if not np.all(np.isfinite(a)):
            raise ValueError("cost matrix entries must be finite")
        object.__setattr__(self, "entries", _frozen(a))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __neg__(self) -> "CostMatrix":
        return CostMatrix(-self.entries, self.dist_label)

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def to_csv(self) -> str:
        return matrix_to_csv(self.entries)


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection of ``range(n)``; ``mapping[i]`` is the column of row ``i``."""

    mapping: np.ndarray

    def __post_init__(self):
        a = np.array(self.mapping, dtype=np.int64, copy=True).ravel()
        if not _is_bijection(a, len(a)):
            raise ValueError(f"not a permutation of 0..{len(a) - 1}: {a.tolist()}")
        object.__setattr__(self, "mapping", _frozen(a))

    @classmethod
    def from_one_based(cls, indices: Iterable[int]) -> "Permutation":
        return cls(np.asarray(list(indices), dtype=np.int64) - 1)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def one_based(self) -> list[int]:
        return (self.mapping + 1).tolist()

    def __len__(self):
        return len(self.mapping)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.mapping, other.mapping)

    def __hash__(self):
        return hash(self.mapping.tobytes())

    def __repr__(self):
        return f"Permutation({self.one_based()})"

    def to_text(self) -> str:
        return ",".join(str(i) for i in self.one_based())


@dataclass(frozen=True)
class AssignmentResult:
    perm: Permutation
    value: float
    method: Method
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "permutation": self.perm.one_based(),
            "method": self.method.value,
        }


def _is_bijection(a: np.ndarray, n: int) -> bool:
    if a.shape != (n,):
        return False
    if n == 0:
        return False
    if a.min() < 0 or a.max() >= n:
        return False
    return np.unique(a).size == n


def validate_permutation(p: Permutation | Sequence[int], n: int) -> bool:
    """True iff ``p`` is a bijection on ``[1..n]``.

    Plain sequences are read as 1-based, matching the text format; a
    :class:`Permutation` is checked for length only (it cannot be built
    invalid).
    """
    if isinstance(p, Permutation):
        return p.n == n
    try:
        a = np.asarray(list(p))
    except TypeError:
        return False
    if a.ndim != 1 or (a.size and not np.issubdtype(a.dtype, np.integer)):
        return False
    return _is_bijection(a.astype(np.int64) - 1, n)


def _as_array(m) -> np.ndarray:
    return m.entries if isinstance(m, CostMatrix) else np.asarray(m, dtype=np.float64)


def assignment_value(m: CostMatrix | np.ndarray, p: Permutation | Sequence[int]) -> float:
    """Sum of ``m[i, p(i)]`` over all rows.

    ``p`` is a :class:`Permutation` or a 0-based index array. The sum is
    correctly rounded (``math.fsum``), so it does not depend on row order.
    """
    a = _as_array(m)
    idx = p.mapping if isinstance(p, Permutation) else np.asarray(p, dtype=np.int64)
    if idx.shape != (a.shape[0],):
        raise DimensionMismatch(
            f"permutation of length {idx.size} does not fit a {a.shape[0]}x{a.shape[0]} matrix"
        )
    return math.fsum(a[np.arange(a.shape[0]), idx])


# -- text formats -----------------------------------------------------------


def matrix_to_csv(a: np.ndarray) -> str:
    buf = io.StringIO()
    for row in np.asarray(a, dtype=np.float64):
        buf.write(",".join(format(float(x), ".17g") for x in row))
        buf.write("\n")
    return buf.getvalue()


def matrix_from_csv(text: str, dist_label: DistributionKind | None = None) -> CostMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise InvalidSize("empty matrix CSV")
    try:
        data = [[float(c) for c in r] for r in rows]
    except ValueError as exc:
        raise ValueError(f"non-numeric matrix entry: {exc}") from None
    widths = {len(r) for r in data}
    if len(widths) != 1:
        raise DimensionMismatch(f"ragged matrix CSV (row widths {sorted(widths)})")
    return CostMatrix(np.array(data), dist_label)


def permutation_from_text(text: str) -> Permutation:
    return Permutation.from_one_based(int(t) for t in text.strip().split(",") if t.strip())
