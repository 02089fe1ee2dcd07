"""Gaussian random assignment: the greedy row-maximum strategy, an exact
assignment solver, asymptotic constants and seeded Monte Carlo checks."""

__version__ = "0.1.0"

from .asymptotics import (
    CltConstants,
    GumbelNorming,
    clt_constants,
    fernique_upper,
    gumbel_norming,
    leading_order,
    lower_bound_witness,
    normal_tail_lower,
    parisi_sum,
    steele_expansion,
)
from .core import (
    AssignmentResult,
    CostMatrix,
    DistributionKind,
    Method,
    Permutation,
    assignment_value,
    validate_permutation,
)
from .estimators import ExactAssignment, GreedyAssignment, check_cost_matrix
from .greedy import greedy_assign, greedy_marginals
from .sampling import RunSeed, derive_stream, gen_matrix
from .solver import SolverLimits, brute_force_max, hungarian_max, hungarian_min
from .stats import (
    exact_max_moments,
    gumbel_cdf,
    gumbel_moments,
    ks_distance,
    lyapunov_fraction,
    phi_cdf,
    phi_tail,
    summarize,
)
