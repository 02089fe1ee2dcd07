"""Closed-form constants and bounds for the Gaussian assignment process."""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gammaln

from .exceptions import DomainError
from .stats import EULER_GAMMA, ZETA2, ZETA3, phi_tail  # noqa: F401  (re-exported)


@dataclass(frozen=True)
class GumbelNorming:
    """Centering ``a`` and scaling ``b`` for the max of ``m`` standard normals."""

    m: int
    a: float
    b: float

    def standardize(self, x):
        return (x - self.a) / self.b


@dataclass(frozen=True)
class CltConstants:
    n: int
    A_n: float
    B_n_sq: float


def _require_int(n, name="n") -> int:
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"{name} must be an integer, got {n!r}")
    return int(n)


def leading_order(n: int) -> float:
    """``n * sqrt(2 log n)``, the growth rate of the expected maximum."""
    n = _require_int(n)
    if n < 2:
        raise DomainError(f"leading order needs n >= 2, got {n}")
    return n * math.sqrt(2.0 * math.log(n))


def log_factorial(n: int) -> float:
    return float(gammaln(n + 1)) if n > 20 else math.log(math.factorial(n))


def fernique_upper(n: int) -> float:
    """Upper bound ``sqrt(2 n log n!)`` on the expected maximum assignment.

    Max of ``n!`` centered Gaussians, each with variance ``n``.
    """
    n = _require_int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return math.sqrt(2.0 * log_factorial(n) * n)


def gumbel_norming(m: int) -> GumbelNorming:
    m = _require_int(m, "m")
    if m < 2:
        raise DomainError(f"norming constants need m >= 2, got {m}")
    root = math.sqrt(2.0 * math.log(m))
    a = root - (math.log(math.log(m)) + math.log(4.0 * math.pi)) / (2.0 * root)
    return GumbelNorming(m, a, 1.0 / root)


def normal_tail_lower(r: float) -> float:
    """Lower bound ``(1/r - 1/r^3) * phi(r)`` for the normal tail, valid for r > 1."""
    if not r > 1:
        raise DomainError(f"tail lower bound needs r > 1, got {r}")
    return (1.0 / r - 1.0 / r**3) * math.exp(-0.5 * r * r) / math.sqrt(2.0 * math.pi)


def lower_bound_witness(m: int) -> float:
    """``r * (1 - exp(-m * tail_lower(r)))`` at ``r = sqrt(2 log m) - 1``.

    Lower-bounds the expected positive part of the max of ``m`` normals,
    via ``E max+ >= r (1 - Phi(r)^m)`` and ``Phi^m <= exp(-m * tail)``.
    """
    m = _require_int(m, "m")
    if m < 3:
        raise DomainError(f"witness needs m >= 3, got {m}")
    r = math.sqrt(2.0 * math.log(m)) - 1.0
    return r * -math.expm1(-m * normal_tail_lower(r))


def clt_constants(n: int) -> CltConstants:
    """First-order Gumbel predictions of the greedy value's mean and variance.

    Row with ``m`` remaining columns contributes ``a_m + gamma * b_m`` to the
    mean and ``zeta(2) * b_m**2`` to the variance; ``m = 1`` is a plain
    standard normal (mean 0, variance 1).
    """
    n = _require_int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    means = [0.0]
    variances = [1.0]
    for m in range(2, n + 1):
        g = gumbel_norming(m)
        means.append(g.a + EULER_GAMMA * g.b)
        variances.append(ZETA2 * g.b * g.b)
    return CltConstants(n, math.fsum(means), math.fsum(variances))


def variance_leading(n: int) -> float:
    """``(pi^2 / 12) * n / log n``."""
    return math.pi**2 / 12.0 * n / math.log(n)


def parisi_sum(n: int) -> float:
    """Expected min assignment for Exp(1) costs: ``sum_{k<=n} 1/k^2``."""
    n = _require_int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return math.fsum(1.0 / (k * k) for k in range(1, n + 1))


def steele_expansion(n: int) -> float:
    """Two-term expansion ``zeta(2) - (zeta(2) + 2 zeta(3)) / n`` of the
    expected min assignment for U(0, 1) costs."""
    n = _require_int(n)
    if n < 2:
        raise DomainError(f"expansion needs n >= 2, got {n}")
    return ZETA2 - (ZETA2 + 2.0 * ZETA3) / n


def asymptotics_row(n: int) -> dict:
    """One row of the ``asymptotics`` table; undefined entries are NaN."""
    nan = float("nan")
    clt = clt_constants(n)
    return {
        "n": n,
        "leading_order": leading_order(n) if n >= 2 else nan,
        "fernique_upper": fernique_upper(n),
        "A_n": clt.A_n,
        "B_n_sq": clt.B_n_sq,
        "parisi_sum": parisi_sum(n),
        "steele_expansion": steele_expansion(n) if n >= 2 else nan,
    }
