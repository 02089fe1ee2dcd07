"""Reproducible cost-matrix generation.

Every Monte Carlo trial owns a stream derived from ``(master, trial)``
through numpy's ``SeedSequence`` hash; the bit generator is PCG64.
Gaussian variates use the Marsaglia polar method on the stream's uniform
doubles, so the k-th normal is a fixed function of the uniform sequence no
matter how generation is chunked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .core import CostMatrix, DistributionKind
from .exceptions import InvalidSize

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RunSeed:
    master: int
    trial: int = 0

    def __post_init__(self):
        for name in ("master", "trial"):
            v = getattr(self, name)
            if not (0 <= int(v) <= _U64):
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v}")

    def to_dict(self) -> dict:
        return {"master": self.master, "trial": self.trial}


def derive_stream(seed: RunSeed) -> np.random.Generator:
    """Independent PCG64 stream keyed by ``(master, trial)``."""
    ss = np.random.SeedSequence([int(seed.master), int(seed.trial)])
    return np.random.Generator(np.random.PCG64(ss))


@numba.njit(cache=True)
def _polar_fill(rng, out):
    """Fill ``out`` (1-D) with standard normals by the polar method."""
    n = out.shape[0]
    k = 0
    while k < n:
        while True:
            v1 = 2.0 * rng.random() - 1.0
            v2 = 2.0 * rng.random() - 1.0
            s = v1 * v1 + v2 * v2
            if s < 1.0 and s != 0.0:
                break
        f = np.sqrt(-2.0 * np.log(s) / s)
        out[k] = v1 * f
        k += 1
        if k < n:
            out[k] = v2 * f
            k += 1


def standard_normals(rng: np.random.Generator, size: int) -> np.ndarray:
    out = np.empty(int(size), dtype=np.float64)
    _polar_fill(rng, out)
    return out


def draw(rng: np.random.Generator, dist: DistributionKind, size: int) -> np.ndarray:
    dist = DistributionKind(dist)
    if dist is DistributionKind.GAUSSIAN:
        return standard_normals(rng, size)
    u = rng.random(int(size))
    if dist is DistributionKind.EXPONENTIAL:
        return -np.log1p(-u)
    return u


def gen_matrix(n: int, dist: DistributionKind, seed: RunSeed) -> CostMatrix:
    """n x n matrix of i.i.d. draws from ``dist``, filled row-major."""
    if n < 1:
        raise InvalidSize(f"matrix size must be >= 1, got {n}")
    dist = DistributionKind(dist)
    values = draw(derive_stream(seed), dist, n * n)
    return CostMatrix(values.reshape(n, n), dist)
