"""Versioned JSON configs: the task spec with its shift suite and the training grid."""

import dataclasses
import os
from collections.abc import Sequence
from typing import Union

from src.exceptions import ConfigurationError
from src.models.bench import SyntheticTask, TrainConfig
from src.utils.file_utils import load_json_file
from src.utils.seeding import subcommand_seed

PathLike = Union[str, os.PathLike]

CONFIG_FORMAT_VERSION = 1


def _load_versioned(path: PathLike, key: str):
    try:
        data = load_json_file(path)
    except ValueError as e:
        raise ConfigurationError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(data, dict) or data.get("format_version") != CONFIG_FORMAT_VERSION:
        raise ConfigurationError(f"{path}: expected format_version {CONFIG_FORMAT_VERSION}")
    if key not in data:
        raise ConfigurationError(f"{path}: missing '{key}'")
    return data[key]


def load_task_config(path: PathLike) -> SyntheticTask:
    """Read ``{"format_version": 1, "task": {...}}``.

    Raises:
        ConfigurationError: unreadable or unversioned file
        TaskSpecError: the task itself is degenerate
    """
    task = _load_versioned(path, "task")
    if not isinstance(task, dict):
        raise ConfigurationError(f"{path}: 'task' must be an object")
    return SyntheticTask.from_dict(task)


def load_grid(path: PathLike) -> list[TrainConfig]:
    """Read ``{"format_version": 1, "configs": [...]}``.

    An empty grid is returned as-is; `train_pool` rejects it.
    """
    configs = _load_versioned(path, "configs")
    if not isinstance(configs, list):
        raise ConfigurationError(f"{path}: 'configs' must be a list")
    return [TrainConfig.from_dict(entry) for entry in configs]


# ===== Seed fan-out =====

TASK_SEED_LABEL = "make-task"
GRID_SEED_LABEL = "train-pool"


def reseed_task(task: SyntheticTask, seed: int) -> SyntheticTask:
    """Replace the task seed with one derived from a run-level seed."""
    return dataclasses.replace(task, seed=subcommand_seed(seed, TASK_SEED_LABEL))


def reseed_grid(grid: Sequence[TrainConfig], seed: int) -> list[TrainConfig]:
    """Replace every config seed with one derived from a run-level seed and the grid index."""
    return [
        dataclasses.replace(config, seed=subcommand_seed(seed, GRID_SEED_LABEL, index))
        for index, config in enumerate(grid)
    ]
