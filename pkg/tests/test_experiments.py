import math

import numpy as np
import pytest

from ral.asymptotics import leading_order, parisi_sum, steele_expansion
from ral.core import DistributionKind
from ral.exceptions import SizeExceeded
from ral.experiments import (
    ExperimentConfig,
    Objective,
    clt_experiment,
    optimality_gap,
    paired_greedy_exact,
    pairing_index,
    parisi_experiment,
    ratio_experiment,
    run_trials,
    uniform_experiment,
)
from ral.greedy import greedy_marginals
from ral.sampling import RunSeed, gen_matrix
from ral.stats import predicted_greedy_moments

G, E, U = DistributionKind.GAUSSIAN, DistributionKind.EXPONENTIAL, DistributionKind.UNIFORM


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig((10,), 1, 0)
    with pytest.raises(ValueError):
        ExperimentConfig((0,), 5, 0)
    with pytest.raises(SizeExceeded):
        ExperimentConfig((5001,), 5, 0, objective=Objective.EXACT_MAX)
    ExperimentConfig((10**5,), 5, 0, objective=Objective.GREEDY_MAX)


def test_pairing_index_injective():
    seen = {pairing_index(s, t) for s in range(4) for t in (0, 1, 2**32 - 1)}
    assert len(seen) == 12
    with pytest.raises(ValueError):
        pairing_index(0, 2**32)


def test_n1_records_are_the_single_entry():
    cfg = ExperimentConfig((1,), 5, 77)
    recs = run_trials(cfg)
    assert [r.trial for r in recs] == list(range(5))
    for r in recs:
        assert r.value == gen_matrix(1, G, r.seed).entries[0, 0]
        assert r.seed == RunSeed(77, pairing_index(0, r.trial))


def test_records_sorted_by_n_then_trial():
    recs = run_trials(ExperimentConfig((30, 5, 12), 3, 1))
    assert [(r.n, r.trial) for r in recs] == [(n, t) for n in (5, 12, 30) for t in range(3)]


@pytest.mark.parametrize("objective", list(Objective))
def test_run_trials_deterministic(objective):
    cfg = ExperimentConfig((3, 8), 6, 123, G, objective)
    a = [r.value for r in run_trials(cfg)]
    b = [r.value for r in run_trials(cfg)]
    assert a == b


def test_worker_count_does_not_change_values():
    base = ExperimentConfig((4, 25), 12, 9, G, Objective.GREEDY_MAX, workers=1)
    par = ExperimentConfig((4, 25), 12, 9, G, Objective.GREEDY_MAX, workers=3)
    assert [r.value for r in run_trials(base)] == [r.value for r in run_trials(par)]


def test_greedy_records_equal_marginal_sums():
    for r in run_trials(ExperimentConfig((1, 2, 40), 4, 5)):
        marg = greedy_marginals(gen_matrix(r.n, G, r.seed))
        assert abs(math.fsum(marg) - r.value) <= 1e-9


def test_ratio_experiment_fields():
    (rep,) = ratio_experiment(ExperimentConfig((50,), 200, 3))
    assert rep.ratio == pytest.approx(rep.mean_value / leading_order(50))
    assert rep.predicted_ratio == pytest.approx(predicted_greedy_moments(50)[0] / leading_order(50))
    assert 0 < rep.ratio < 1.2
    assert abs(rep.mean_value - predicted_greedy_moments(50)[0]) <= 3 * rep.std_error


def test_ratio_experiment_rejects_min():
    with pytest.raises(ValueError):
        ratio_experiment(ExperimentConfig((5,), 3, 0, G, Objective.EXACT_MIN))


def test_ratio_n1_is_nan():
    (rep,) = ratio_experiment(ExperimentConfig((1,), 3, 0))
    assert math.isnan(rep.ratio)


def test_clt_single_normal_is_normal():
    rep = clt_experiment(ExperimentConfig((1,), 10**4, 31))
    assert rep.ks_sample_standardized <= 0.0195
    assert rep.ks_to_phi <= 0.0195
    assert rep.predicted_A == pytest.approx(0.0, abs=1e-12)
    assert rep.predicted_Bsq_exact == pytest.approx(1.0, abs=1e-12)


def test_clt_requires_single_n():
    with pytest.raises(ValueError):
        clt_experiment(ExperimentConfig((1, 2), 10, 0))


def test_parisi_small_n():
    reps = parisi_experiment(ExperimentConfig((1, 2), 10**5, 17, E, Objective.EXACT_MIN))
    assert [r.n for r in reps] == [1, 2]
    for r in reps:
        assert r.parisi_value == parisi_sum(r.n)
        assert abs(r.mc_min_mean - r.parisi_value) <= 3 * r.std_error


def test_parisi_n10():
    (r,) = parisi_experiment(ExperimentConfig((10,), 10**4, 18, E, Objective.EXACT_MIN))
    assert r.parisi_value == pytest.approx(1.5497677311665408)
    assert abs(r.mc_min_mean - r.parisi_value) <= 3 * r.std_error


def test_parisi_requires_exponential():
    with pytest.raises(ValueError):
        parisi_experiment(ExperimentConfig((3,), 10, 0, U, Objective.EXACT_MIN))


def test_uniform_small_n_bounds():
    (r,) = uniform_experiment(ExperimentConfig((2,), 10**5, 19, U, Objective.EXACT_MIN))
    assert 0 < r.mc_min_mean < 2


def test_uniform_expansion_error_shrinks_with_n():
    r10, r100 = uniform_experiment(ExperimentConfig((10, 100), 2000, 20, U, Objective.EXACT_MIN))
    assert r10.steele_value == steele_expansion(10)
    dev10 = abs(r10.mc_min_mean - r10.steele_value)
    dev100 = abs(r100.mc_min_mean - r100.steele_value)
    allowance100 = 3 * r100.std_error + 0.01
    assert dev10 > allowance100 > dev100


def test_gap_pairing_is_exact_per_trial():
    for pv in paired_greedy_exact(ExperimentConfig((1, 6, 40), 50, 21)):
        assert np.all(pv.exact >= pv.greedy)
        if pv.n == 1:
            assert np.all(pv.exact == pv.greedy)


def test_gap_normalized_decreases():
    reps = optimality_gap(ExperimentConfig((10, 100, 1000), 30, 22))
    assert reps[0].gap == pytest.approx(reps[0].exact_mean - reps[0].greedy_mean)
    norm = [r.gap / leading_order(r.n) for r in reps]
    hi = [(r.gap + 3 * r.gap_std_error) / leading_order(r.n) for r in reps]
    lo = [(r.gap - 3 * r.gap_std_error) / leading_order(r.n) for r in reps]
    assert norm[0] > norm[1] > norm[2]
    assert lo[0] > hi[2]


def test_gap_n1_zero():
    (r,) = optimality_gap(ExperimentConfig((1,), 5, 0))
    assert r.gap == 0.0
