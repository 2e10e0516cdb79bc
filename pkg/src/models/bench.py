"""Bench models: synthetic tasks, datasets, training configs and evaluation results."""

from dataclasses import asdict, dataclass, field
from typing import Any, Optional

import numpy as np

from src.exceptions import TaskSpecError
from src.models.enums import ShiftKind, TaskGenerator


@dataclass(frozen=True)
class ShiftSpec:
    """One label-preserving distribution shift applied to the clean test set.

    `magnitude` meaning per kind: rotation angle in degrees, noise sigma,
    dropout rate, scaling factor deviation (x * (1 + magnitude)), blur weight.
    """

    shift_id: str
    kind: ShiftKind
    magnitude: float

    def to_dict(self) -> dict[str, Any]:
        return {"shift_id": self.shift_id, "kind": self.kind.value, "magnitude": self.magnitude}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ShiftSpec":
        try:
            return cls(
                shift_id=str(data["shift_id"]),
                kind=ShiftKind(data["kind"]),
                magnitude=float(data["magnitude"]),
            )
        except (KeyError, ValueError) as e:
            raise TaskSpecError(f"Malformed shift spec {data!r}: {e}") from e


@dataclass(frozen=True)
class SyntheticTask:
    """Specification of a synthetic classification task and its shift suite."""

    generator: TaskGenerator = TaskGenerator.GAUSSIAN_BLOBS
    input_dim: int = 8
    num_classes: int = 4
    n_train: int = 1200
    n_val: int = 2000
    n_test: int = 2000
    seed: int = 0
    shifts: tuple[ShiftSpec, ...] = ()

    def validate(self) -> None:
        if self.num_classes < 2:
            raise TaskSpecError(f"num_classes must be >= 2, got {self.num_classes}")
        if self.input_dim < 2:
            raise TaskSpecError(f"input_dim must be >= 2, got {self.input_dim}")
        for split, count in (("train", self.n_train), ("val", self.n_val), ("test", self.n_test)):
            if count < 1:
                raise TaskSpecError(f"split '{split}' is empty")
        shift_ids = [s.shift_id for s in self.shifts]
        if len(set(shift_ids)) != len(shift_ids):
            raise TaskSpecError(f"duplicate shift ids: {shift_ids}")
        reserved = {"train", "val", "test"}
        if reserved & set(shift_ids):
            raise TaskSpecError(f"shift ids must not reuse split names {sorted(reserved)}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "generator": self.generator.value,
            "input_dim": self.input_dim,
            "num_classes": self.num_classes,
            "n_train": self.n_train,
            "n_val": self.n_val,
            "n_test": self.n_test,
            "seed": self.seed,
            "shifts": [s.to_dict() for s in self.shifts],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SyntheticTask":
        try:
            task = cls(
                generator=TaskGenerator(data.get("generator", TaskGenerator.GAUSSIAN_BLOBS.value)),
                input_dim=int(data.get("input_dim", 8)),
                num_classes=int(data.get("num_classes", 4)),
                n_train=int(data.get("n_train", 1200)),
                n_val=int(data.get("n_val", 2000)),
                n_test=int(data.get("n_test", 2000)),
                seed=int(data.get("seed", 0)),
                shifts=tuple(ShiftSpec.from_dict(s) for s in data.get("shifts", [])),
            )
        except (TypeError, ValueError) as e:
            raise TaskSpecError(f"Malformed task spec: {e}") from e
        task.validate()
        return task


@dataclass
class DatasetSplit:
    """Features (float32, [n, d]) and integer labels of one split."""

    name: str
    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.features.ndim != 2 or self.labels.ndim != 1:
            raise TaskSpecError(f"split '{self.name}' must have 2-D features and 1-D labels")
        if self.features.shape[0] != self.labels.shape[0]:
            raise TaskSpecError(f"split '{self.name}' has mismatched feature/label counts")

    def __len__(self) -> int:
        return int(self.labels.shape[0])


@dataclass
class DatasetBundle:
    """Materialized task: train/val/test splits plus one shifted test set per shift."""

    task: SyntheticTask
    splits: dict[str, DatasetSplit]

    @property
    def shift_ids(self) -> list[str]:
        return [s.shift_id for s in self.task.shifts]

    def split(self, name: str) -> DatasetSplit:
        try:
            return self.splits[name]
        except KeyError:
            raise TaskSpecError(f"unknown split '{name}', have {sorted(self.splits)}") from None


@dataclass(frozen=True)
class TrainConfig:
    """One point of the hyperparameter grid.

    Every config in a pool must share `hidden_sizes` and `init_id`.
    """

    config_id: str
    hidden_sizes: tuple[int, ...] = (32, 32, 32)
    learning_rate: float = 0.05
    weight_decay: float = 1e-4
    epochs: int = 30
    batch_size: int = 32
    augmentation_noise: float = 0.0
    seed: int = 0
    init_id: int = 0
    ridge_head: bool = True

    def validate(self) -> None:
        if self.epochs < 1 or self.batch_size < 1:
            raise TaskSpecError(f"config '{self.config_id}' needs epochs >= 1 and batch_size >= 1")
        if self.learning_rate <= 0 or self.weight_decay < 0 or self.augmentation_noise < 0:
            raise TaskSpecError(f"config '{self.config_id}' has a negative rate or noise level")
        if any(h < 1 for h in self.hidden_sizes):
            raise TaskSpecError(f"config '{self.config_id}' has an empty hidden layer")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["hidden_sizes"] = list(self.hidden_sizes)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TrainConfig":
        try:
            values = dict(data)
            values["hidden_sizes"] = tuple(int(h) for h in values.get("hidden_sizes", (32, 32, 32)))
            return cls(**values)
        except (TypeError, ValueError) as e:
            raise TaskSpecError(f"Malformed train config {data!r}: {e}") from e


@dataclass
class EvalResult:
    """Top-1 accuracies on validation, clean test and each shifted test set."""

    clean_acc: float
    shift_accs: dict[str, float] = field(default_factory=dict)
    val_acc: Optional[float] = None
    label: Optional[str] = None
    kind: Optional[str] = None  # "model" or a soup method

    @property
    def avg_ood(self) -> float:
        """Unweighted mean over the shift suite."""
        if not self.shift_accs:
            return float("nan")
        return float(np.mean(list(self.shift_accs.values())))

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "kind": self.kind,
            "val_acc": self.val_acc,
            "clean_acc": self.clean_acc,
            "shift_accs": dict(self.shift_accs),
            "avg_ood": self.avg_ood if self.shift_accs else None,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EvalResult":
        return cls(
            clean_acc=float(data["clean_acc"]),
            shift_accs={k: float(v) for k, v in data.get("shift_accs", {}).items()},
            val_acc=None if data.get("val_acc") is None else float(data["val_acc"]),
            label=data.get("label"),
            kind=data.get("kind"),
        )
