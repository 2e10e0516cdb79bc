"""Top-1 accuracy of bench classifiers, in distribution and under shift."""

from typing import Optional

import numpy as np

from src.app_config import AppConfig
from src.bench.mlp import MLPArchitecture, predict
from src.exceptions import SchemaMismatchError
from src.models.bench import DatasetBundle, DatasetSplit, EvalResult
from src.models.parameter_set import ParameterSet


def _check_compatible(params: ParameterSet, split: DatasetSplit, num_classes: Optional[int]) -> None:
    arch = MLPArchitecture.from_params(params)
    if arch.input_dim != split.features.shape[1]:
        raise SchemaMismatchError(
            f"model expects {arch.input_dim} input features, split '{split.name}' "
            f"has {split.features.shape[1]}"
        )
    if num_classes is not None and arch.num_classes != num_classes:
        raise SchemaMismatchError(
            f"model predicts {arch.num_classes} classes, task has {num_classes}"
        )


def evaluate(params: ParameterSet, split: DatasetSplit, num_classes: Optional[int] = None) -> float:
    """Fraction of correctly classified examples (correct / total).

    Raises:
        SchemaMismatchError: parameters do not fit the split's feature dimension
    """
    _check_compatible(params, split, num_classes)
    correct = int(np.count_nonzero(predict(params, split.features) == split.labels))
    return correct / len(split)


def evaluate_ood(params: ParameterSet, bundle: DatasetBundle, label: Optional[str] = None) -> EvalResult:
    """Validation, clean test and per-shift accuracies.

    Shift accuracies follow the declaration order of the task's shift suite.
    """
    num_classes = bundle.task.num_classes
    return EvalResult(
        label=label,
        val_acc=evaluate(params, bundle.split(AppConfig.BENCH_VALIDATION_SPLIT), num_classes),
        clean_acc=evaluate(params, bundle.split(AppConfig.BENCH_CLEAN_TEST_SPLIT), num_classes),
        shift_accs={
            shift_id: evaluate(params, bundle.split(shift_id), num_classes)
            for shift_id in bundle.shift_ids
        },
    )


class BenchEvaluator:
    """Soup evaluator scoring parameter sets on one split of a bundle."""

    def __init__(self, bundle: DatasetBundle, split: str = AppConfig.BENCH_VALIDATION_SPLIT):
        self.bundle = bundle
        self.split = bundle.split(split)
        self.dataset_id = f"{bundle.task.generator.value}:seed={bundle.task.seed}:{split}"

    def evaluate(self, params: ParameterSet) -> float:
        return evaluate(params, self.split, self.bundle.task.num_classes)
