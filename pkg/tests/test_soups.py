"""Uniform, greedy and manifold soups on scripted evaluators."""

import numpy as np
import pytest

from src.exceptions import (
    ConfigurationError,
    ObjectiveEvaluationError,
    SoupAbortedError,
    SoupKitError,
    UnknownTensorError,
)
from src.models import PartitionSpec
from src.partition import auto_partition
from src.soups import (
    CountingEvaluator,
    approx_average_gate,
    greedy_soup,
    manifold_mix_soup,
    soup_registry,
    sort_pool,
    uniform_soup,
)
from src.tensor_store import lincomb, mean

from .conftest import (
    DistanceEvaluator,
    FailingEvaluator,
    TableEvaluator,
    make_pool,
    random_params,
)


def _hull_check(fused, members):
    for name in fused:
        stack = np.stack([m[name] for m in members])
        assert np.all(fused[name] >= stack.min(axis=0) - 1e-6)
        assert np.all(fused[name] <= stack.max(axis=0) + 1e-6)


# ===== Uniform =====


def test_uniform_soup_is_elementwise_mean():
    params = [random_params(seed) for seed in range(4)]
    fused, report = uniform_soup(make_pool(params))
    for name in fused:
        expected = sum(p[name].astype(np.float64) for p in params) / 4
        np.testing.assert_allclose(fused[name], expected, rtol=1e-6, atol=1e-7)
    assert report.k == 4
    assert report.accepted_ids == ["m1", "m2", "m3"]
    assert report.val_acc is None
    assert report.total_evaluations == 0


def test_uniform_soup_scores_result_when_evaluator_given():
    evaluator = TableEvaluator(fallback=0.42)
    _, report = uniform_soup(make_pool([random_params(0), random_params(1)]), evaluator)
    assert report.val_acc == 0.42
    assert report.evaluations["final"] == 1
    assert report.total_evaluations == evaluator.calls


def test_single_model_pool_returns_that_model():
    theta = random_params(11)
    pool = make_pool([theta], accs=[0.5])
    evaluator = TableEvaluator()
    for fused, report in (
        uniform_soup(pool),
        greedy_soup(pool, evaluator),
        manifold_mix_soup(pool, auto_partition(theta.names, 2), evaluator),
    ):
        assert fused == theta
        assert report.candidates == []
        assert report.k == 1
    assert evaluator.calls == 0


def test_empty_pool_is_rejected():
    with pytest.raises(SoupKitError) as excinfo:
        uniform_soup(make_pool([]))
    assert not isinstance(excinfo.value, SoupAbortedError)


# ===== Building blocks =====


def test_sort_pool_fills_missing_accuracies_and_keeps_ties_stable():
    params = [random_params(seed) for seed in range(4)]
    evaluator = TableEvaluator()
    evaluator.set(params[1], 0.9)
    pool = make_pool(params, accs=[0.7, None, 0.7, 0.8], ids=["a", "b", "c", "d"])
    ordered = sort_pool(pool, evaluator)
    assert ordered.ids == ["b", "d", "a", "c"]
    assert ordered.sorted
    assert evaluator.calls == 1


def test_gate_uses_strict_threshold():
    psi, theta = random_params(1), random_params(2)
    evaluator = TableEvaluator()
    evaluator.set(lincomb(0.5, psi, 0.5, theta), 0.8)
    assert approx_average_gate(psi, theta, 1, evaluator, tau=0.998, psi_acc=0.8) == (True, 0.8)
    assert approx_average_gate(psi, theta, 1, evaluator, tau=1.0, psi_acc=0.8) == (False, 0.8)
    with pytest.raises(ValueError):
        approx_average_gate(psi, theta, 1, evaluator, tau=1.5, psi_acc=0.8)


def test_counting_evaluator_attributes_calls_to_phases():
    counter = CountingEvaluator(TableEvaluator(fallback=0.1))
    ps = random_params(0)
    with counter.phase("gate"):
        counter.evaluate(ps)
        with counter.phase("optimize"):
            counter.evaluate(ps)
            counter.evaluate(ps)
        counter.evaluate(ps)
    assert counter.counts == {"gate": 2, "optimize": 2}
    assert counter.total == 4


# ===== Greedy =====


def test_greedy_soup_keeps_only_improving_models():
    a, b, c = random_params(1), random_params(2), random_params(3)
    evaluator = TableEvaluator(fallback=0.0)
    evaluator.set(mean([a, b]), 0.85)
    evaluator.set(mean([a, b, c]), 0.85)
    fused, report = greedy_soup(make_pool([b, a, c], accs=[0.8, 0.82, 0.7], ids=["b", "a", "c"]), evaluator)

    assert report.ordering == ["a", "b", "c"]
    assert report.accepted_ids == ["b"]
    assert report.trajectory == [0.82, 0.85]
    assert report.k == 2
    assert fused == mean([a, b])
    assert report.evaluations["accept"] == 2


# ===== Manifold =====


def test_manifold_budget_one_degenerates_to_the_gate_average():
    params = [random_params(seed) for seed in range(3)]
    target = random_params(99)
    evaluator = DistanceEvaluator(target)
    spec = auto_partition(params[0].names, 2)
    _, report = manifold_mix_soup(make_pool(params), spec, evaluator, tau=0.0, budget=1)

    k = 1
    for record in report.candidates:
        assert record.optimizer_evaluations == 1
        assert record.acc_after == record.gate_acc
        assert record.lambda_star == [k / (k + 1)] * 2
        if record.accepted:
            k += 1


def test_manifold_rejects_invalid_partition_before_running():
    params = [random_params(0), random_params(1)]
    spec = PartitionSpec(m=1, assignment={name: 1 for name in params[0].names} | {"ghost": 1})
    with pytest.raises(UnknownTensorError):
        manifold_mix_soup(make_pool(params), spec, TableEvaluator())


def test_soups_abort_with_partial_report():
    params = [random_params(seed) for seed in range(3)]
    failing = FailingEvaluator(TableEvaluator(fallback=0.5), fail_at=2)
    with pytest.raises(SoupAbortedError) as excinfo:
        greedy_soup(make_pool(params, accs=[0.5, 0.4, 0.3]), failing)
    assert isinstance(excinfo.value.__cause__, RuntimeError)
    assert [c.id for c in excinfo.value.report.candidates] == ["m1", "m2"]

    failing = FailingEvaluator(TableEvaluator(fallback=0.5), fail_at=3)
    spec = auto_partition(params[0].names, 2)
    with pytest.raises(SoupAbortedError) as excinfo:
        manifold_mix_soup(make_pool(params, accs=[0.5, 0.4, 0.3]), spec, failing, tau=0.0)
    assert isinstance(excinfo.value.__cause__, ObjectiveEvaluationError)
    assert excinfo.value.report.evaluations["gate"] == 1


@pytest.mark.parametrize("seed", range(20))
def test_soups_never_lose_accuracy_and_stay_in_the_hull(seed):
    rng = np.random.default_rng(seed)
    params = [random_params(int(s)) for s in rng.integers(0, 10_000, 4)]
    target = random_params(int(rng.integers(0, 10_000)), scale=0.5)
    spec = auto_partition(params[0].names, 2)
    pool = make_pool(params)

    for fused, report in (
        greedy_soup(pool, DistanceEvaluator(target)),
        manifold_mix_soup(pool, spec, DistanceEvaluator(target), budget=30, seed=seed),
    ):
        first = report.ordering[0]
        assert report.val_acc >= report.trajectory[0]
        assert all(a < b for a, b in zip(report.trajectory, report.trajectory[1:]))
        assert len(report.trajectory) == report.k
        by_id = {member.id: member.params for member in pool}
        _hull_check(fused, [by_id[first]] + [by_id[i] for i in report.accepted_ids])


def test_evaluation_counts_reconcile_and_runs_are_deterministic():
    params = [random_params(seed) for seed in range(4)]
    target = random_params(123, scale=0.3)
    spec = auto_partition(params[0].names, 4)

    evaluator = DistanceEvaluator(target)
    fused, report = manifold_mix_soup(make_pool(params), spec, evaluator, budget=25, seed=5)
    assert report.total_evaluations == evaluator.calls
    assert report.evaluations["sort"] == 4
    assert report.evaluations["accept"] == 0
    assert report.evaluations["optimize"] == sum(c.optimizer_evaluations for c in report.candidates)

    again, report_again = manifold_mix_soup(
        make_pool(params), spec, DistanceEvaluator(target), budget=25, seed=5
    )
    assert again == fused
    assert report_again.to_dict() == report.to_dict()


def test_registry():
    assert soup_registry.methods() == ["uniform", "greedy", "manifold"]
    with pytest.raises(ConfigurationError):
        soup_registry.create("ensemble")
    with pytest.raises(ConfigurationError):
        soup_registry.create("manifold", evaluator=None, partition=None)
