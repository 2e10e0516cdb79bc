"""Domain models for the model soup toolkit.

Weights (ParameterSet), partitions and mixing vectors, pools and soup
reports, optimizer problems, and the bench's tasks and results.
"""

from .bench import (
    DatasetBundle,
    DatasetSplit,
    EvalResult,
    ShiftSpec,
    SyntheticTask,
    TrainConfig,
)
from .enums import (
    PartitionStrategy,
    ReportFormat,
    ShiftKind,
    SolverKind,
    SoupMethod,
    TaskGenerator,
)
from .optimization import OptimizationProblem, OptimizationResult
from .parameter_set import ParameterSet
from .partition_spec import MixingVector, PartitionSpec
from .pool import ModelPool, PoolMember
from .soup_report import CandidateRecord, SoupReport

__all__ = [
    # Weights and mixing
    "ParameterSet",
    "PartitionSpec",
    "MixingVector",
    # Pools and reports
    "ModelPool",
    "PoolMember",
    "SoupReport",
    "CandidateRecord",
    # Optimization
    "OptimizationProblem",
    "OptimizationResult",
    # Bench
    "SyntheticTask",
    "ShiftSpec",
    "TrainConfig",
    "DatasetSplit",
    "DatasetBundle",
    "EvalResult",
    # Enums
    "SoupMethod",
    "PartitionStrategy",
    "SolverKind",
    "TaskGenerator",
    "ShiftKind",
    "ReportFormat",
]
