"""Stages of the end-to-end soup experiment."""

from .base_stage import ExperimentContext, PipelineStage, StageResult, StageStatus
from .evaluate_stage import EvaluateStage
from .report_stage import ReportStage
from .soup_stage import SoupStage, manifold_variant
from .task_stage import TaskStage
from .train_stage import TrainStage

__all__ = [
    "PipelineStage",
    "StageResult",
    "ExperimentContext",
    "StageStatus",
    "TaskStage",
    "TrainStage",
    "SoupStage",
    "EvaluateStage",
    "ReportStage",
    "manifold_variant",
]
