"""Shared fixtures: tiny parameter sets, scripted evaluators and a tiny task."""

from collections.abc import Callable, Sequence
from typing import Optional, Union

import numpy as np
import pytest

from src.models import (
    ModelPool,
    ParameterSet,
    PoolMember,
    ShiftSpec,
    SyntheticTask,
    TrainConfig,
)
from src.models.enums import ShiftKind

TINY_SCHEMA = (
    ("layers.0.weight", (3, 2)),
    ("layers.0.bias", (3,)),
    ("head.weight", (2, 3)),
    ("head.bias", (2,)),
)


def random_params(seed: int, schema=TINY_SCHEMA, scale: float = 1.0) -> ParameterSet:
    rng = np.random.default_rng(seed)
    return ParameterSet([(name, scale * rng.standard_normal(shape)) for name, shape in schema])


def make_pool(
    params: Sequence[ParameterSet],
    accs: Optional[Sequence[Optional[float]]] = None,
    ids: Optional[Sequence[str]] = None,
) -> ModelPool:
    ids = ids or [f"m{i}" for i in range(len(params))]
    accs = accs or [None] * len(params)
    return ModelPool([PoolMember(i, p, a) for i, p, a in zip(ids, params, accs)])


class TableEvaluator:
    """Accuracy looked up by parameter digest; unknown models get `fallback`."""

    dataset_id = "scripted"

    def __init__(self, fallback: Union[float, Callable[[ParameterSet], float]] = 0.0):
        self.table: dict[str, float] = {}
        self.fallback = fallback
        self.calls = 0

    def set(self, params: ParameterSet, acc: float) -> None:
        self.table[params.digest()] = acc

    def evaluate(self, params: ParameterSet) -> float:
        self.calls += 1
        acc = self.table.get(params.digest())
        if acc is not None:
            return acc
        return self.fallback(params) if callable(self.fallback) else self.fallback


class DistanceEvaluator:
    """Quantized closeness to a target model, in (0, 1]."""

    dataset_id = "distance"

    def __init__(self, target: ParameterSet, levels: int = 1000):
        self.target = target
        self.levels = levels
        self.calls = 0

    def evaluate(self, params: ParameterSet) -> float:
        self.calls += 1
        distance = sum(
            float(np.sum((params[name].astype(np.float64) - self.target[name]) ** 2))
            for name in params
        )
        return round(self.levels / (1.0 + distance)) / self.levels


class FailingEvaluator:
    """Delegates to `inner` and raises on call number `fail_at` (1-based)."""

    dataset_id = "failing"

    def __init__(self, inner, fail_at: int):
        self.inner = inner
        self.fail_at = fail_at
        self.calls = 0

    def evaluate(self, params: ParameterSet) -> float:
        self.calls += 1
        if self.calls == self.fail_at:
            raise RuntimeError("evaluator crashed")
        return self.inner.evaluate(params)


def build_tiny_task() -> SyntheticTask:
    return SyntheticTask(
        input_dim=4,
        num_classes=3,
        n_train=240,
        n_val=90,
        n_test=120,
        seed=7,
        shifts=(
            ShiftSpec("noise", ShiftKind.NOISE, 0.5),
            ShiftSpec("rotation", ShiftKind.ROTATION, 20.0),
        ),
    )


def build_tiny_grid() -> list[TrainConfig]:
    return [
        TrainConfig(f"cfg-{i}", hidden_sizes=(8, 8), learning_rate=lr, epochs=5, batch_size=16, seed=i)
        for i, lr in enumerate((0.02, 0.05, 0.1))
    ]


@pytest.fixture
def tiny_task() -> SyntheticTask:
    return build_tiny_task()


@pytest.fixture
def tiny_grid() -> list[TrainConfig]:
    return build_tiny_grid()
