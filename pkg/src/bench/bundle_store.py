"""On-disk dataset bundles.

A bundle directory holds `bundle.json` (task spec plus split index) and one
checkpoint-format file per split with two float32 tensors, `features` [n, d]
and `labels` [n].
"""

import os
from pathlib import Path
from typing import Union

import numpy as np

from src.app_config import AppConfig
from src.exceptions import TaskSpecError
from src.models.bench import DatasetBundle, DatasetSplit, SyntheticTask
from src.models.parameter_set import ParameterSet
from src.tensor_store import load_checkpoint, save
from src.utils.file_utils import ensure_dir, load_json_file, save_json_to_file

PathLike = Union[str, os.PathLike]

BUNDLE_FORMAT_VERSION = 1


def save_bundle(bundle: DatasetBundle, directory: PathLike) -> str:
    """Write a bundle directory and return the descriptor path."""
    root = ensure_dir(directory)
    index = {}
    for name, split in bundle.splits.items():
        filename = f"{name}{AppConfig.CHECKPOINT_SUFFIX}"
        tensors = ParameterSet(
            [("features", split.features), ("labels", split.labels.astype(np.float32))]
        )
        save(tensors, {"split": name}, root / filename)
        index[name] = {"file": filename, "size": len(split)}

    descriptor = {
        "format_version": BUNDLE_FORMAT_VERSION,
        "task": bundle.task.to_dict(),
        "splits": index,
    }
    return save_json_to_file(descriptor, root / AppConfig.BENCH_BUNDLE_DESCRIPTOR)


def load_bundle(path: PathLike) -> DatasetBundle:
    """Read a bundle from its directory or its descriptor file.

    Raises:
        TaskSpecError: malformed descriptor or split file
        CheckpointError: a split file is corrupt
    """
    path = Path(path)
    descriptor_path = path / AppConfig.BENCH_BUNDLE_DESCRIPTOR if path.is_dir() else path
    root = descriptor_path.parent
    try:
        descriptor = load_json_file(descriptor_path)
    except ValueError as e:
        raise TaskSpecError(f"{descriptor_path} is not valid JSON: {e}") from e
    if not isinstance(descriptor, dict):
        raise TaskSpecError(f"{descriptor_path}: descriptor must be a JSON object")
    if descriptor.get("format_version") != BUNDLE_FORMAT_VERSION:
        raise TaskSpecError(
            f"{descriptor_path}: unsupported bundle format {descriptor.get('format_version')!r}"
        )

    if not isinstance(descriptor.get("task"), dict) or not isinstance(descriptor.get("splits"), dict):
        raise TaskSpecError(f"{descriptor_path}: descriptor needs 'task' and 'splits' objects")
    task = SyntheticTask.from_dict(descriptor["task"])
    splits = {}
    for name, entry in descriptor["splits"].items():
        if not isinstance(entry, dict) or not isinstance(entry.get("file"), str):
            raise TaskSpecError(f"{descriptor_path}: split '{name}' needs a 'file' name")
        tensors = load_checkpoint(root / entry["file"]).params
        if "features" not in tensors or "labels" not in tensors:
            raise TaskSpecError(f"split file {entry['file']} lacks 'features'/'labels'")
        labels = tensors["labels"]
        if not np.array_equal(labels, np.round(labels)) or np.any(labels < 0):
            raise TaskSpecError(f"split '{name}' has non-integer labels")
        splits[name] = DatasetSplit(
            name=name,
            features=np.array(tensors["features"]),
            labels=labels.astype(np.int64),
        )

    missing = {"train", "val", "test", *(shift.shift_id for shift in task.shifts)} - set(splits)
    if missing:
        raise TaskSpecError(f"{descriptor_path}: missing splits {sorted(missing)}")
    return DatasetBundle(task=task, splits=splits)
