"""Synthetic tasks, dataset bundles, MLP evaluation and pool training."""

import dataclasses
import json
from pathlib import Path

import numpy as np
import pytest

from src.bench import (
    BenchEvaluator,
    MLPArchitecture,
    apply_shift,
    evaluate,
    evaluate_ood,
    load_bundle,
    majority_class_rate,
    make_task,
    save_bundle,
    train_pool,
)
from src.exceptions import ConfigurationError, SchemaMismatchError, TaskSpecError
from src.models import DatasetSplit, ParameterSet, ShiftSpec, SyntheticTask, TrainConfig
from src.models.enums import ShiftKind


def test_make_task_is_deterministic_and_balanced(tiny_task):
    first, second = make_task(tiny_task), make_task(tiny_task)
    assert list(first.splits) == ["train", "val", "test", "noise", "rotation"]
    for name, split in first.splits.items():
        assert np.array_equal(split.features, second.splits[name].features)
        assert np.array_equal(split.labels, second.splits[name].labels)

    assert [len(first.split(s)) for s in ("train", "val", "test")] == [240, 90, 120]
    total = np.concatenate([first.split(s).labels for s in ("train", "val", "test")])
    assert np.bincount(total).tolist() == [150, 150, 150]

    other = make_task(dataclasses.replace(tiny_task, seed=8))
    assert not np.array_equal(other.split("train").features, first.split("train").features)


def test_shifts_preserve_labels(tiny_task):
    bundle = make_task(tiny_task)
    test = bundle.split("test")
    for shift_id in bundle.shift_ids:
        shifted = bundle.split(shift_id)
        assert np.array_equal(shifted.labels, test.labels)
        assert shifted.features.shape == test.features.shape
        assert not np.array_equal(shifted.features, test.features)


def test_zero_magnitude_shift_is_identity():
    rng = np.random.default_rng(0)
    split = DatasetSplit("test", rng.normal(size=(10, 3)).astype(np.float32), np.arange(10) % 2)
    for kind in ShiftKind:
        shifted = apply_shift(split, ShiftSpec("s", kind, 0.0), rng)
        assert np.array_equal(shifted.features, split.features)


def test_rotation_and_scaling_shifts():
    split = DatasetSplit("test", np.array([[1.0, 0.0, 2.0]], dtype=np.float32), np.array([0]))
    rotated = apply_shift(split, ShiftSpec("r", ShiftKind.ROTATION, 90.0), np.random.default_rng(0))
    np.testing.assert_allclose(rotated.features, [[0.0, 1.0, 2.0]], atol=1e-6)
    scaled = apply_shift(split, ShiftSpec("s", ShiftKind.SCALING, 0.5), np.random.default_rng(0))
    np.testing.assert_allclose(scaled.features, [[1.5, 0.0, 3.0]])


def test_degenerate_tasks_are_rejected(tiny_task):
    for bad in (
        dataclasses.replace(tiny_task, num_classes=1),
        dataclasses.replace(tiny_task, n_val=0),
        dataclasses.replace(tiny_task, shifts=(ShiftSpec("val", ShiftKind.NOISE, 0.1),)),
    ):
        with pytest.raises(TaskSpecError):
            make_task(bad)


def test_bundle_roundtrip(tiny_task, tmp_path):
    bundle = make_task(tiny_task)
    descriptor = save_bundle(bundle, tmp_path / "task")
    restored = load_bundle(descriptor)
    assert restored.task == tiny_task
    for name, split in bundle.splits.items():
        assert np.array_equal(restored.split(name).features, split.features)
        assert np.array_equal(restored.split(name).labels, split.labels)
    assert load_bundle(tmp_path / "task").shift_ids == ["noise", "rotation"]


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: [d],
        lambda d: {**d, "splits": {**d["splits"], "train": "train.ckpt"}},
        lambda d: {**d, "splits": {**d["splits"], "train": {"size": 3}}},
        lambda d: {**d, "splits": {**d["splits"], "train": {"file": 7}}},
        lambda d: {**d, "task": {**d["task"], "shifts": "noise"}},
    ],
    ids=["not-an-object", "entry-not-object", "entry-without-file", "file-not-string", "bad-shifts"],
)
def test_malformed_bundle_descriptor_is_a_task_error(tiny_task, tmp_path, mutate):
    descriptor = Path(save_bundle(make_task(tiny_task), tmp_path / "task"))
    original = json.loads(descriptor.read_text(encoding="utf-8"))
    descriptor.write_text(json.dumps(mutate(original)), encoding="utf-8")
    with pytest.raises(TaskSpecError):
        load_bundle(descriptor)


def test_constant_predictor_on_balanced_set_scores_half():
    params = ParameterSet(
        {
            "layers.0.weight": np.zeros((2, 2)),
            "layers.0.bias": np.zeros(2),
            "head.weight": np.zeros((2, 2)),
            "head.bias": np.array([1.0, 0.0]),
        }
    )
    split = DatasetSplit("val", np.ones((4, 2), dtype=np.float32), np.array([0, 1, 0, 1]))
    assert evaluate(params, split) == 0.5
    with pytest.raises(SchemaMismatchError):
        evaluate(params, split, num_classes=3)


def test_mlp_schema():
    arch = MLPArchitecture(input_dim=8, hidden_sizes=(32, 32, 32), num_classes=4)
    names = [name for name, _ in arch.schema()]
    assert len(names) == 8
    assert names[0] == "layers.0.weight" and names[-1] == "head.bias"
    with pytest.raises(SchemaMismatchError):
        MLPArchitecture.from_params(ParameterSet({"w": np.zeros(3)}))


def test_train_pool(tiny_task, tiny_grid):
    bundle = make_task(tiny_task)
    pool = train_pool(bundle, tiny_grid)
    assert pool.ids == ["cfg-0", "cfg-1", "cfg-2"]
    assert pool.failures == []
    baseline = majority_class_rate(bundle)
    for member in pool:
        assert member.val_acc > baseline
        assert member.val_acc == BenchEvaluator(bundle).evaluate(member.params)
        assert member.metadata["learning_rate"] == str(
            next(c.learning_rate for c in tiny_grid if c.config_id == member.id)
        )

    again = train_pool(bundle, tiny_grid[:1])
    assert again[0].params == pool[0].params

    result = evaluate_ood(pool[0].params, bundle, label="cfg-0")
    assert list(result.shift_accs) == ["noise", "rotation"]
    assert result.avg_ood == pytest.approx(np.mean(list(result.shift_accs.values())))


def test_diverging_config_is_recorded(tiny_task, tiny_grid):
    bundle = make_task(tiny_task)
    grid = [tiny_grid[0], dataclasses.replace(tiny_grid[1], learning_rate=1e300)]
    pool = train_pool(bundle, grid)
    assert pool.ids == ["cfg-0"]
    assert [f["config_id"] for f in pool.failures] == ["cfg-1"]


def test_invalid_grids(tiny_task, tiny_grid):
    bundle = make_task(tiny_task)
    with pytest.raises(ConfigurationError):
        train_pool(bundle, [])
    with pytest.raises(TaskSpecError):
        train_pool(bundle, [tiny_grid[0], dataclasses.replace(tiny_grid[1], hidden_sizes=(4,))])
    with pytest.raises(TaskSpecError):
        train_pool(bundle, [tiny_grid[0], dataclasses.replace(tiny_grid[1], config_id="cfg-0")])
    with pytest.raises(TaskSpecError):
        train_pool(bundle, [TrainConfig("bad", epochs=0)])


def test_task_config_parsing():
    task = SyntheticTask.from_dict(
        {"generator": "two-spirals", "input_dim": 3, "num_classes": 2, "shifts": []}
    )
    assert task.generator.value == "two-spirals"
    bundle = make_task(dataclasses.replace(task, n_train=20, n_val=10, n_test=10))
    assert bundle.split("train").features.shape == (20, 3)
    with pytest.raises(TaskSpecError):
        SyntheticTask.from_dict({"generator": "moons"})
