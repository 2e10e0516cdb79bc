"""Base classes for experiment stages."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from src.app_config import AppConfig
from src.bench.configs import reseed_grid, reseed_task
from src.models.bench import DatasetBundle, EvalResult, SyntheticTask, TrainConfig
from src.models.enums import PartitionStrategy
from src.models.parameter_set import ParameterSet
from src.models.pool import ModelPool
from src.models.soup_report import SoupReport
from src.soups.registry import soup_seed
from src.utils.logging_utils import SoupLogger
from src.utils.pipeline_persistence import PipelinePersistence


class StageStatus(Enum):
    """Status of a pipeline stage execution."""
    SUCCESS = "success"
    FAILED = "failed"
    SKIPPED = "skipped"
    PARTIAL = "partial"


@dataclass
class StageResult:
    """Result of a pipeline stage execution."""
    stage_name: str
    status: StageStatus
    data: dict[str, Any] = field(default_factory=dict)
    file_paths: dict[str, str] = field(default_factory=dict)
    metrics: dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    exception: Optional[BaseException] = None
    duration_seconds: float = 0.0


@dataclass
class ExperimentContext:
    """Context object passed between experiment stages."""
    # Configuration
    task: SyntheticTask
    grid: list[TrainConfig]
    out_dir: Path
    tau: float = AppConfig.SOUP_DEFAULT_TAU
    budget: int = AppConfig.SOUP_DEFAULT_BUDGET
    seed: Optional[int] = None
    solver: str = AppConfig.DFO_DEFAULT_SOLVER
    manifold_variants: list[int] = field(
        default_factory=lambda: list(AppConfig.BENCH_MANIFOLD_VARIANTS)
    )
    partition_strategy: PartitionStrategy = PartitionStrategy.CONTIGUOUS_BLOCKS
    show_progress: bool = False

    # Data flow between stages
    bundle: Optional[DatasetBundle] = None
    pool: Optional[ModelPool] = None
    soups: dict[str, tuple[ParameterSet, SoupReport]] = field(default_factory=dict)
    eval_results: dict[str, EvalResult] = field(default_factory=dict)

    # File tracking
    file_paths: dict[str, str] = field(default_factory=dict)

    # Execution tracking
    stage_results: dict[str, StageResult] = field(default_factory=dict)

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        self.persistence = PipelinePersistence(self.out_dir)
        if self.seed is not None:
            self.task = reseed_task(self.task, self.seed)
            self.grid = reseed_grid(self.grid, self.seed)

    @property
    def soup_seed(self) -> int:
        """Seed of every soup in the run; matches `soup --seed` with the same run seed."""
        return soup_seed(AppConfig.SOUP_DEFAULT_SEED if self.seed is None else self.seed)

    def add_stage_result(self, result: StageResult) -> None:
        """Add a stage result to the context."""
        self.stage_results[result.stage_name] = result

        # Merge file paths
        self.file_paths.update(result.file_paths)


class PipelineStage(ABC):
    """Base class for all experiment stages."""

    def __init__(self, stage_name: str):
        """Initialize the pipeline stage.

        Args:
            stage_name: Name of this stage
        """
        self.stage_name = stage_name
        self.logger = SoupLogger(f"Stage.{stage_name}")

    @abstractmethod
    def execute(self, context: ExperimentContext) -> StageResult:
        """Execute this pipeline stage.

        Args:
            context: Experiment context with configuration and upstream outputs

        Returns:
            StageResult with execution results
        """
        pass

    def _create_success_result(
        self,
        data: Optional[dict[str, Any]] = None,
        file_paths: Optional[dict[str, str]] = None,
        metrics: Optional[dict[str, Any]] = None,
    ) -> StageResult:
        """Create a successful stage result."""
        return StageResult(
            stage_name=self.stage_name,
            status=StageStatus.SUCCESS,
            data=data or {},
            file_paths=file_paths or {},
            metrics=metrics or {},
        )

    def _create_error_result(self, error: BaseException) -> StageResult:
        """Create a failed stage result."""
        return StageResult(
            stage_name=self.stage_name,
            status=StageStatus.FAILED,
            error=str(error),
            exception=error,
        )

    def _create_partial_result(
        self,
        data: Optional[dict[str, Any]] = None,
        file_paths: Optional[dict[str, str]] = None,
        metrics: Optional[dict[str, Any]] = None,
        error: Optional[str] = None,
        exception: Optional[BaseException] = None,
    ) -> StageResult:
        """Create a partial success stage result; `exception` is the first error caught."""
        return StageResult(
            stage_name=self.stage_name,
            status=StageStatus.PARTIAL,
            data=data or {},
            file_paths=file_paths or {},
            metrics=metrics or {},
            error=error,
            exception=exception,
        )

    def _create_skipped_result(self, reason: str) -> StageResult:
        """Create a skipped stage result (missing upstream output)."""
        return StageResult(stage_name=self.stage_name, status=StageStatus.SKIPPED, error=reason)
