"""Exception classes for the model soup toolkit."""

from typing import Any, Optional


class SoupKitError(Exception):
    """Base exception for all toolkit errors."""
    pass


class ConfigurationError(SoupKitError):
    """Exception raised for configuration-related errors.

    This includes inconsistent CLI flags, invalid config files and
    unparseable environment overrides.
    """
    pass


# ===== Checkpoint format =====


class CheckpointError(SoupKitError):
    """Exception raised when a checkpoint file cannot be decoded."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class CorruptHeaderError(CheckpointError):
    """Bad magic bytes, truncated or unparseable manifest, or trailing bytes."""
    pass


class OffsetLayoutError(CorruptHeaderError):
    """Tensor records overlap, are unaligned, or point outside the data section."""
    pass


class TruncatedCheckpointError(CheckpointError):
    """The data section is shorter than the manifest declares."""
    pass


class ShapeLengthMismatchError(CheckpointError):
    """A tensor's byte length disagrees with the product of its shape."""
    pass


class UnsupportedVersionError(CheckpointError):
    """The manifest declares a format version this reader does not know."""

    def __init__(self, version: Any, path: Optional[str] = None):
        super().__init__(f"unsupported format_version {version!r}", path)
        self.version = version


# ===== Numerics =====


class NumericError(SoupKitError):
    """Exception raised for numeric failures (non-finite values, divergence)."""
    pass


class NonFiniteValueError(NumericError):
    """A tensor contains NaN or Inf."""

    def __init__(self, tensor_name: str, path: Optional[str] = None):
        where = f" in {path}" if path else ""
        super().__init__(f"non-finite values in tensor '{tensor_name}'{where}")
        self.tensor_name = tensor_name
        self.path = path


class TrainingDivergedError(NumericError):
    """Training produced a non-finite loss."""

    def __init__(self, config_id: str, epoch: int):
        super().__init__(f"training config '{config_id}' diverged at epoch {epoch}")
        self.config_id = config_id
        self.epoch = epoch


# ===== Schemas and partitions =====


class SchemaMismatchError(SoupKitError):
    """Two parameter sets (or a set and an architecture) disagree on names, shapes or order."""
    pass


class PartitionError(SoupKitError):
    """Base class for invalid partition specifications."""
    pass


class UnassignedTensorError(PartitionError):
    def __init__(self, tensor_name: str):
        super().__init__(f"unassigned tensor {tensor_name}")
        self.tensor_name = tensor_name


class UnknownTensorError(PartitionError):
    def __init__(self, tensor_name: str):
        super().__init__(f"unknown tensor {tensor_name}")
        self.tensor_name = tensor_name


class EmptyComponentError(PartitionError):
    def __init__(self, component: int):
        super().__init__(f"empty component {component}")
        self.component = component


class ComponentIndexError(PartitionError):
    def __init__(self, tensor_name: str, component: Any, m: int):
        super().__init__(
            f"tensor {tensor_name} assigned to component {component!r}, expected 1..{m}"
        )
        self.tensor_name = tensor_name
        self.component = component


class PartitionTooFineError(PartitionError):
    """More components requested than the strategy can produce."""
    pass


# ===== Mixing vectors =====


class MixingVectorError(SoupKitError):
    """Base class for invalid mixing vectors."""
    pass


class BoundViolationError(MixingVectorError):
    def __init__(self, index: int, value: float):
        super().__init__(f"mixing factor {index + 1} = {value!r} outside [0, 1]")
        self.index = index
        self.value = value


class MixingLengthError(MixingVectorError):
    def __init__(self, length: int, m: int):
        super().__init__(f"mixing vector has length {length}, partition has m={m}")
        self.length = length
        self.m = m


# ===== Optimization and soups =====


class OptimizationError(SoupKitError):
    """Exception raised for derivative-free optimizer failures."""
    pass


class ObjectiveEvaluationError(OptimizationError):
    """The black-box objective raised; carries the number of completed evaluations."""

    def __init__(self, message: str, evaluations_completed: int):
        super().__init__(f"{message} (after {evaluations_completed} evaluations)")
        self.evaluations_completed = evaluations_completed


class SoupAbortedError(SoupKitError):
    """A soup run failed part-way; `report` holds the trace up to the failure."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


# ===== Bench =====


class TaskSpecError(SoupKitError):
    """A synthetic task or training config is degenerate or inconsistent."""
    pass


class PoolManifestError(SoupKitError):
    """A pool manifest is malformed or lists inconsistent members."""
    pass
