"""Enumerations for the toolkit's domain models.

Values double as the strings accepted on the command line and written to
reports and config files.
"""

from enum import Enum


class SoupMethod(Enum):
    """Fusion algorithms."""
    UNIFORM = "uniform"
    GREEDY = "greedy"
    MANIFOLD = "manifold"


class PartitionStrategy(Enum):
    """Deterministic auto-partition strategies.

    - CONTIGUOUS_BLOCKS: split the ordered tensor list into m nearly equal runs
    - BY_NAME_PREFIX: group by dotted-name prefix, then merge adjacent groups
    """
    CONTIGUOUS_BLOCKS = "contiguous-blocks"
    BY_NAME_PREFIX = "by-name-prefix"


class SolverKind(Enum):
    """Derivative-free solvers for the mixing-factor search."""
    COBYLA = "cobyla"
    NELDER_MEAD = "nelder-mead"


class TaskGenerator(Enum):
    """Synthetic classification generators."""
    GAUSSIAN_BLOBS = "gaussian-blobs"
    TWO_SPIRALS = "two-spirals"


class ShiftKind(Enum):
    """Label-preserving synthetic distribution shifts."""
    ROTATION = "rotation"
    NOISE = "noise"
    DROPOUT = "dropout"
    SCALING = "scaling"
    BLUR = "blur"


class ReportFormat(Enum):
    """Output formats of `report`."""
    JSON = "json"
    MARKDOWN = "md"
