"""Persistence of pools, soups and evaluation results.

Layout used by the staged experiment under its base directory:

    01_task/       dataset bundle
    02_pool/       one checkpoint per pool member + pool.json
    03_soups/      <variant>/fused.ckpt + soup_report.json
    04_eval/       <label>.json evaluation results
    05_report/     report.md, report.json, id_vs_ood.png
"""

import os
from pathlib import Path
from typing import Union

from src.app_config import AppConfig
from src.exceptions import PoolManifestError, SchemaMismatchError
from src.models.bench import EvalResult
from src.models.parameter_set import ParameterSet
from src.models.pool import ModelPool, PoolMember
from src.models.soup_report import SoupReport
from src.tensor_store import load_checkpoint, save
from src.utils.file_utils import ensure_dir, load_json_file, save_json_to_file
from src.utils.logging_utils import SoupLogger

PathLike = Union[str, os.PathLike]

POOL_FORMAT_VERSION = 1

logger = SoupLogger(__name__)


# ===== Pools =====


def save_pool(pool: ModelPool, directory: PathLike) -> str:
    """Write every member checkpoint plus the pool manifest.

    Returns:
        Path of the manifest (pool.json)
    """
    root = ensure_dir(directory)
    entries = []
    for member in pool.members:
        filename = f"{member.id}{AppConfig.CHECKPOINT_SUFFIX}"
        save(member.params, member.metadata, root / filename)
        entries.append({"id": member.id, "checkpoint": filename, "val_acc": member.val_acc})

    manifest = {
        "format_version": POOL_FORMAT_VERSION,
        "members": entries,
        "failures": list(pool.failures),
    }
    path = save_json_to_file(manifest, root / AppConfig.BENCH_POOL_MANIFEST)
    logger.info(f"Saved pool of {len(pool)} models to {path}")
    return path


def load_pool(path: PathLike) -> ModelPool:
    """Read a pool from its directory or its manifest file.

    Raises:
        PoolManifestError: malformed manifest or duplicate ids
        SchemaMismatchError: members disagree on tensor schema
        CheckpointError: a member checkpoint is corrupt
        OSError: a member checkpoint is missing
    """
    path = Path(path)
    manifest_path = path / AppConfig.BENCH_POOL_MANIFEST if path.is_dir() else path
    try:
        manifest = load_json_file(manifest_path)
    except ValueError as e:
        raise PoolManifestError(f"{manifest_path} is not valid JSON: {e}") from e
    if not isinstance(manifest, dict) or manifest.get("format_version") != POOL_FORMAT_VERSION:
        raise PoolManifestError(f"{manifest_path}: unsupported pool manifest")

    members = []
    for entry in manifest.get("members", []):
        try:
            checkpoint = load_checkpoint(manifest_path.parent / entry["checkpoint"])
            val_acc = entry.get("val_acc")
            members.append(
                PoolMember(
                    id=str(entry["id"]),
                    params=checkpoint.params,
                    val_acc=None if val_acc is None else float(val_acc),
                    metadata=checkpoint.metadata,
                )
            )
        except (KeyError, TypeError) as e:
            raise PoolManifestError(f"{manifest_path}: malformed member entry {entry!r}") from e

    try:
        return ModelPool(members=members, failures=list(manifest.get("failures", [])))
    except SchemaMismatchError:
        raise
    except ValueError as e:
        raise PoolManifestError(f"{manifest_path}: {e}") from e


# ===== Soups =====


def save_soup(fused: ParameterSet, report: SoupReport, directory: PathLike) -> str:
    """Write the fused checkpoint and the soup report; returns the report path.

    The checkpoint path is recorded in the report before it is written.
    """
    root = ensure_dir(directory)
    checkpoint_path = root / AppConfig.SOUP_CHECKPOINT_FILENAME
    metadata = {"method": report.method, "k": report.k, "val_acc": repr(report.val_acc)}
    report.checkpoint_path = save(fused, metadata, checkpoint_path)
    return save_json_to_file(report.to_dict(), root / AppConfig.SOUP_REPORT_FILENAME)


# ===== Evaluation results =====


def save_eval_result(result: EvalResult, path: PathLike) -> str:
    return save_json_to_file(result.to_dict(), path)


def load_eval_result(path: PathLike) -> EvalResult:
    """Read an evaluation result written by `save_eval_result`.

    Raises:
        PoolManifestError: the file is not an evaluation result
    """
    try:
        return EvalResult.from_dict(load_json_file(path))
    except (KeyError, TypeError, ValueError) as e:
        raise PoolManifestError(f"{path} is not an evaluation result: {e}") from e


class PipelinePersistence:
    """Stage directories of one experiment run."""

    def __init__(self, base_dir: PathLike):
        self.base_dir = Path(base_dir)
        self.logger = SoupLogger(self.__class__.__name__)

    @property
    def task_dir(self) -> Path:
        return self.base_dir / "01_task"

    @property
    def pool_dir(self) -> Path:
        return self.base_dir / "02_pool"

    def soup_dir(self, variant: str) -> Path:
        return self.base_dir / "03_soups" / variant

    def eval_path(self, label: str) -> Path:
        return self.base_dir / "04_eval" / f"{label}.json"

    @property
    def report_dir(self) -> Path:
        return self.base_dir / "05_report"
