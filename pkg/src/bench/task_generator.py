"""Synthetic classification tasks with a suite of label-preserving shifts."""

import numpy as np

from src.app_config import AppConfig
from src.models.bench import DatasetBundle, DatasetSplit, ShiftSpec, SyntheticTask
from src.models.enums import ShiftKind, TaskGenerator
from src.utils.logging_utils import SoupLogger
from src.utils.seeding import make_rng

logger = SoupLogger(__name__)


# ===== Generators =====


def _gaussian_blobs(task: SyntheticTask, labels: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Isotropic blobs; class centers sit on a circle in dims 0-1.

    Extra dimensions get small per-class center offsets, so they carry a
    little signal but the first two dimensions dominate.
    """
    angles = 2.0 * np.pi * np.arange(task.num_classes) / task.num_classes
    centers = np.zeros((task.num_classes, task.input_dim))
    centers[:, 0] = AppConfig.BENCH_BLOB_RADIUS * np.cos(angles)
    centers[:, 1] = AppConfig.BENCH_BLOB_RADIUS * np.sin(angles)
    if task.input_dim > 2:
        centers[:, 2:] = rng.normal(
            0.0, AppConfig.BENCH_BLOB_EXTRA_SPREAD, (task.num_classes, task.input_dim - 2)
        )
    noise = rng.normal(0.0, AppConfig.BENCH_BLOB_STD, (labels.size, task.input_dim))
    return centers[labels] + noise


def _two_spirals(task: SyntheticTask, labels: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One spiral arm per class in dims 0-1; remaining dims are pure noise."""
    t = rng.uniform(0.0, 1.0, labels.size)
    phase = 2.0 * np.pi * labels / task.num_classes
    angle = 2.0 * np.pi * AppConfig.BENCH_SPIRAL_TURNS * t + phase
    radius = 0.5 + AppConfig.BENCH_BLOB_RADIUS * t
    features = rng.normal(0.0, 1.0, (labels.size, task.input_dim))
    features[:, 0] = radius * np.cos(angle)
    features[:, 1] = radius * np.sin(angle)
    features[:, :2] += rng.normal(0.0, AppConfig.BENCH_SPIRAL_NOISE, (labels.size, 2))
    return features


_GENERATORS = {
    TaskGenerator.GAUSSIAN_BLOBS: _gaussian_blobs,
    TaskGenerator.TWO_SPIRALS: _two_spirals,
}


# ===== Shifts =====


def apply_shift(split: DatasetSplit, shift: ShiftSpec, rng: np.random.Generator) -> DatasetSplit:
    """Transform the features of a split; labels, size and order are kept.

    A zero magnitude returns an exact copy of the split.
    """
    x = split.features.astype(np.float64)
    if shift.magnitude == 0.0:
        shifted = x
    elif shift.kind is ShiftKind.ROTATION:
        theta = np.deg2rad(shift.magnitude)
        c, s = np.cos(theta), np.sin(theta)
        shifted = x.copy()
        shifted[:, 0] = c * x[:, 0] - s * x[:, 1]
        shifted[:, 1] = s * x[:, 0] + c * x[:, 1]
    elif shift.kind is ShiftKind.NOISE:
        shifted = x + rng.normal(0.0, shift.magnitude, x.shape)
    elif shift.kind is ShiftKind.DROPOUT:
        shifted = np.where(rng.uniform(size=x.shape) < shift.magnitude, 0.0, x)
    elif shift.kind is ShiftKind.SCALING:
        shifted = x * (1.0 + shift.magnitude)
    elif shift.kind is ShiftKind.BLUR:
        # mix every example with a random example of the same class
        partners = np.arange(len(split))
        for label in np.unique(split.labels):
            members = np.flatnonzero(split.labels == label)
            partners[members] = rng.permutation(members)
        shifted = (1.0 - shift.magnitude) * x + shift.magnitude * x[partners]
    else:
        raise ValueError(f"Unsupported shift kind: {shift.kind}")

    return DatasetSplit(
        name=shift.shift_id,
        features=shifted.astype(np.float32),
        labels=split.labels.copy(),
    )


# ===== Task materialization =====


def make_task(task: SyntheticTask) -> DatasetBundle:
    """Materialize train/val/test splits and one shifted copy of test per shift.

    Labels are balanced across classes and shuffled; splits are disjoint
    slices of one shuffled sample. Everything is a deterministic function of
    the task (including its seed).

    Raises:
        TaskSpecError: degenerate task (fewer than 2 classes, empty split...)
    """
    task.validate()
    total = task.n_train + task.n_val + task.n_test
    rng = make_rng(task.seed, "task", task.generator.value)

    labels = rng.permutation(np.arange(total) % task.num_classes)
    features = _GENERATORS[task.generator](task, labels, rng).astype(np.float32)

    bounds = np.cumsum([0, task.n_train, task.n_val, task.n_test])
    splits: dict[str, DatasetSplit] = {}
    for name, start, stop in zip(("train", "val", "test"), bounds[:-1], bounds[1:]):
        splits[name] = DatasetSplit(name, features[start:stop].copy(), labels[start:stop].copy())

    for shift in task.shifts:
        shift_rng = make_rng(task.seed, "shift", shift.shift_id)
        splits[shift.shift_id] = apply_shift(splits["test"], shift, shift_rng)

    logger.info(
        f"Generated {task.generator.value} task: {task.n_train}/{task.n_val}/{task.n_test} "
        f"samples, {len(task.shifts)} shifts"
    )
    return DatasetBundle(task=task, splits=splits)
