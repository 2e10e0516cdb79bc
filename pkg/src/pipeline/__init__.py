"""End-to-end experiment pipeline."""

from src.pipeline.orchestrator import ExperimentOrchestrator, PipelineResult
from src.pipeline.stages import ExperimentContext

__all__ = ["ExperimentOrchestrator", "PipelineResult", "ExperimentContext"]
