"""Single-file checkpoint format (version 1).

Layout:
    bytes 0-7     magic ``SOUPCKPT``
    bytes 8-11    unsigned little-endian header length H
    bytes 12..    UTF-8 JSON manifest
                  {format_version, tensors: [{name, shape, dtype, offset, nbytes}], metadata}
                  padded with spaces so the data section starts 8-byte aligned
    remainder     row-major little-endian float32 data; offsets are relative to
                  the data-section start and 8-byte aligned, gaps zero-filled

The encoding is canonical (compact JSON, sorted metadata keys, tightest
aligned packing, no trailing bytes), so ``save(load(p))`` reproduces any file
this module wrote byte for byte.
"""

import json
import math
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from src.app_config import AppConfig
from src.exceptions import (
    CorruptHeaderError,
    NonFiniteValueError,
    OffsetLayoutError,
    ShapeLengthMismatchError,
    TruncatedCheckpointError,
    UnsupportedVersionError,
)
from src.models.parameter_set import ParameterSet
from src.utils.logging_utils import SoupLogger

PathLike = Union[str, os.PathLike]

_PREFIX = struct.Struct("<8sI")
_FLOAT_BYTES = 4

logger = SoupLogger(__name__)


@dataclass
class Checkpoint:
    """A decoded checkpoint: weights plus the free-form metadata map."""

    params: ParameterSet
    metadata: dict[str, str] = field(default_factory=dict)


def _aligned(offset: int) -> int:
    alignment = AppConfig.CHECKPOINT_ALIGNMENT
    return offset + (-offset) % alignment


def encode_checkpoint(ps: ParameterSet, metadata: Optional[dict[str, Any]] = None) -> bytes:
    """Encode a parameter set and metadata to the canonical byte layout.

    Args:
        ps: Weights to store
        metadata: String map (non-string values are converted with ``str``)

    Returns:
        File contents
    """
    records = []
    chunks: list[bytes] = []
    offset = 0
    for name, tensor in ps.items():
        start = _aligned(offset)
        if start > offset:
            chunks.append(b"\0" * (start - offset))
        payload = tensor.astype("<f4", copy=False).tobytes(order="C")
        records.append(
            {
                "name": name,
                "shape": [int(d) for d in tensor.shape],
                "dtype": AppConfig.CHECKPOINT_DTYPE_TAG,
                "offset": start,
                "nbytes": len(payload),
            }
        )
        chunks.append(payload)
        offset = start + len(payload)

    metadata = metadata or {}
    manifest = {
        "format_version": AppConfig.CHECKPOINT_FORMAT_VERSION,
        "tensors": records,
        "metadata": {str(k): str(metadata[k]) for k in sorted(metadata, key=str)},
    }
    header = json.dumps(manifest, separators=(",", ":"), ensure_ascii=False).encode("utf-8")
    header += b" " * ((-(_PREFIX.size + len(header))) % AppConfig.CHECKPOINT_ALIGNMENT)
    return _PREFIX.pack(AppConfig.CHECKPOINT_MAGIC, len(header)) + header + b"".join(chunks)


def save(ps: ParameterSet, metadata: Optional[dict[str, Any]], path: PathLike) -> str:
    """Write a checkpoint file.

    Args:
        ps: Weights to store
        metadata: String map (hyperparameters, seed, validation accuracy...)
        path: Destination file; parent directories are created

    Returns:
        The written path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(encode_checkpoint(ps, metadata))
    logger.debug(f"Saved {len(ps)} tensors to {target}")
    return str(target)


def _parse_manifest(raw: bytes, path: Optional[str]) -> dict[str, Any]:
    if len(raw) < _PREFIX.size:
        raise CorruptHeaderError("file shorter than the fixed prefix", path)
    magic, header_length = _PREFIX.unpack_from(raw, 0)
    if magic != AppConfig.CHECKPOINT_MAGIC:
        raise CorruptHeaderError(f"bad magic bytes {magic!r}", path)
    header_end = _PREFIX.size + header_length
    if header_end > len(raw):
        raise CorruptHeaderError(
            f"header length {header_length} exceeds file size {len(raw)}", path
        )
    try:
        manifest = json.loads(raw[_PREFIX.size:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CorruptHeaderError(f"unparseable manifest: {e}", path) from e
    if not isinstance(manifest, dict):
        raise CorruptHeaderError("manifest is not a JSON object", path)

    version = manifest.get("format_version")
    if version is None:
        raise CorruptHeaderError("manifest lacks format_version", path)
    if not _is_int(version) or version != AppConfig.CHECKPOINT_FORMAT_VERSION:
        raise UnsupportedVersionError(version, path)
    if not isinstance(manifest.get("tensors"), list):
        raise CorruptHeaderError("manifest lacks a 'tensors' list", path)
    metadata = manifest.get("metadata")
    if not isinstance(metadata, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in metadata.items()
    ):
        raise CorruptHeaderError("manifest 'metadata' must be a string map", path)
    manifest["_header_end"] = header_end
    return manifest


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _check_record(record: Any, path: Optional[str]) -> tuple[str, list[int], int, int]:
    if not isinstance(record, dict):
        raise CorruptHeaderError(f"tensor record {record!r} is not an object", path)
    name = record.get("name")
    shape = record.get("shape")
    offset = record.get("offset")
    nbytes = record.get("nbytes")
    if not isinstance(name, str) or not name:
        raise CorruptHeaderError(f"tensor record has invalid name {name!r}", path)
    if not isinstance(shape, list) or not all(_is_int(d) and d > 0 for d in shape):
        raise CorruptHeaderError(f"tensor '{name}' has invalid shape {shape!r}", path)
    if record.get("dtype") != AppConfig.CHECKPOINT_DTYPE_TAG:
        raise CorruptHeaderError(
            f"tensor '{name}' has dtype {record.get('dtype')!r}, "
            f"expected '{AppConfig.CHECKPOINT_DTYPE_TAG}'",
            path,
        )
    if not _is_int(offset) or not _is_int(nbytes) or offset < 0 or nbytes < 0:
        raise CorruptHeaderError(f"tensor '{name}' has invalid offset/nbytes", path)
    return name, shape, offset, nbytes


def decode_checkpoint(raw: bytes, path: Optional[str] = None) -> Checkpoint:
    """Decode checkpoint bytes, validating every manifest and ParameterSet invariant.

    Raises:
        CorruptHeaderError: bad magic, unparseable manifest, bad record, trailing bytes
        OffsetLayoutError: overlapping, unaligned or non-canonically packed offsets
        UnsupportedVersionError: unknown format_version
        ShapeLengthMismatchError: nbytes != product(shape) * 4
        TruncatedCheckpointError: data section shorter than declared
        NonFiniteValueError: NaN or Inf in a tensor
    """
    manifest = _parse_manifest(raw, path)
    data = memoryview(raw)[manifest["_header_end"]:]

    entries: list[tuple[str, np.ndarray]] = []
    seen: set[str] = set()
    expected = 0
    for record in manifest["tensors"]:
        name, shape, offset, nbytes = _check_record(record, path)
        if name in seen:
            raise CorruptHeaderError(f"duplicate tensor name '{name}'", path)
        seen.add(name)
        if offset % AppConfig.CHECKPOINT_ALIGNMENT:
            raise OffsetLayoutError(f"tensor '{name}' offset {offset} is not 8-byte aligned", path)
        if offset < expected:
            raise OffsetLayoutError(
                f"tensor '{name}' offset {offset} overlaps the previous tensor (ends at {expected})",
                path,
            )
        if offset != _aligned(expected):
            raise OffsetLayoutError(
                f"tensor '{name}' offset {offset} leaves a gap after {expected}", path
            )
        if nbytes != math.prod(shape) * _FLOAT_BYTES:
            raise ShapeLengthMismatchError(
                f"tensor '{name}' declares {nbytes} bytes for shape {shape}", path
            )
        end = offset + nbytes
        if end > len(data):
            raise TruncatedCheckpointError(
                f"tensor '{name}' ends at {end}, data section has {len(data)} bytes", path
            )
        if any(data[expected:offset]):
            raise OffsetLayoutError(f"non-zero padding before tensor '{name}'", path)
        array = np.frombuffer(data, dtype="<f4", count=nbytes // _FLOAT_BYTES, offset=offset)
        if not np.all(np.isfinite(array)):
            raise NonFiniteValueError(name, path)
        entries.append((name, array.reshape(shape)))
        expected = end

    if expected != len(data):
        raise CorruptHeaderError(
            f"{len(data) - expected} trailing bytes after the last tensor", path
        )
    return Checkpoint(params=ParameterSet(entries), metadata=dict(manifest["metadata"]))


def load_checkpoint(path: PathLike) -> Checkpoint:
    """Read and validate a checkpoint file, returning weights and metadata."""
    raw = Path(path).read_bytes()
    checkpoint = decode_checkpoint(raw, str(path))
    logger.debug(f"Loaded {len(checkpoint.params)} tensors from {path}")
    return checkpoint


def load(path: PathLike) -> ParameterSet:
    """Read and validate a checkpoint file, returning only the weights."""
    return load_checkpoint(path).params
