"""Experiment orchestrator: task, pool, soups, evaluation and report in one run."""

import time
from typing import Optional

from src.pipeline.stages import (
    EvaluateStage,
    ExperimentContext,
    ReportStage,
    SoupStage,
    StageResult,
    StageStatus,
    TaskStage,
    TrainStage,
)
from src.utils.logging_utils import SoupLogger


class PipelineResult:
    """Result of a complete experiment execution."""

    def __init__(self, context: ExperimentContext, total_duration: float):
        """Initialize pipeline result.

        Args:
            context: Final experiment context
            total_duration: Total execution time in seconds
        """
        self.context = context
        self.total_duration = total_duration
        self.success = all(
            result.status in (StageStatus.SUCCESS, StageStatus.PARTIAL)
            for result in context.stage_results.values()
        )

    @property
    def stages_completed(self) -> int:
        """Number of stages that completed successfully."""
        return len(
            [
                r
                for r in self.context.stage_results.values()
                if r.status in (StageStatus.SUCCESS, StageStatus.PARTIAL)
            ]
        )

    @property
    def total_stages(self) -> int:
        return len(self.context.stage_results)

    @property
    def first_failure(self) -> Optional[StageResult]:
        """The earliest failed stage, if any."""
        for result in self.context.stage_results.values():
            if result.status == StageStatus.FAILED:
                return result
        return None

    @property
    def first_error(self) -> Optional[StageResult]:
        """The earliest stage that failed or finished partially after catching an error.

        A partial train stage with only diverged configs carries no exception
        and does not count.
        """
        for result in self.context.stage_results.values():
            if result.status == StageStatus.FAILED:
                return result
            if result.status == StageStatus.PARTIAL and result.exception is not None:
                return result
        return None

    @property
    def file_paths(self) -> dict[str, str]:
        return self.context.file_paths


class ExperimentOrchestrator:
    """Runs the five experiment stages in order.

    1. Task: generate the dataset bundle and shifted test sets
    2. Train: finetune the pool from a shared initialization
    3. Soup: uniform, greedy and manifold soups per component count
    4. Evaluate: clean and shifted accuracies of models and soups
    5. Report: comparison table, JSON and chart
    """

    STAGE_ORDER = ("task", "train", "soup", "evaluate", "report")

    def __init__(self):
        self.logger = SoupLogger("ExperimentOrchestrator")
        self.stages = {
            "task": TaskStage(),
            "train": TrainStage(),
            "soup": SoupStage(),
            "evaluate": EvaluateStage(),
            "report": ReportStage(),
        }

    def run_experiment(self, context: ExperimentContext) -> PipelineResult:
        """Run every stage; a stage whose inputs are missing is skipped.

        Args:
            context: Experiment configuration

        Returns:
            PipelineResult with execution results
        """
        start_time = time.time()
        self.logger.info(
            f"🚀 Starting experiment: {len(context.grid)} configs, "
            f"{context.task.generator.value} task, output {context.out_dir}"
        )
        self.logger.info(
            f"🔧 tau={context.tau} budget={context.budget} solver={context.solver} "
            f"manifold m={context.manifold_variants}"
        )

        for stage_name in self.STAGE_ORDER:
            self.run_stage(stage_name, context)

        result = PipelineResult(context, time.time() - start_time)
        self._log_pipeline_summary(result)
        return result

    def run_stage(self, stage_name: str, context: ExperimentContext) -> StageResult:
        """Run an individual stage and record its result in the context."""
        if stage_name not in self.stages:
            raise ValueError(f"Unknown stage: {stage_name}")

        self.logger.info(f"🔄 Executing {stage_name} stage...")
        stage_start = time.time()
        result = self.stages[stage_name].execute(context)
        result.duration_seconds = time.time() - stage_start
        context.add_stage_result(result)

        if result.status == StageStatus.SUCCESS:
            self.logger.info(f"✅ {stage_name} stage completed successfully")
        elif result.status == StageStatus.PARTIAL:
            self.logger.warning(f"⚠️ {stage_name} stage completed with warnings: {result.error}")
        elif result.status == StageStatus.SKIPPED:
            self.logger.warning(f"⏭️ {stage_name} stage skipped: {result.error}")
        else:
            self.logger.error(f"❌ {stage_name} stage failed: {result.error}")
        return result

    def _log_pipeline_summary(self, result: PipelineResult) -> None:
        """Log a summary of the experiment execution."""
        self.logger.info("🎯 EXPERIMENT SUMMARY")
        self.logger.info("=" * 40)

        status_icon = "🎉" if result.success else "⚠️"
        self.logger.info(
            f"{status_icon} Overall Status: {'SUCCESS' if result.success else 'PARTIAL/FAILED'}"
        )
        self.logger.info(f"⏱️ Total Duration: {result.total_duration:.2f} seconds")
        self.logger.info(f"📊 Stages Completed: {result.stages_completed}/{result.total_stages}")

        self.logger.info("📋 Stage Results:")
        for stage_name, stage_result in result.context.stage_results.items():
            icon = {
                StageStatus.SUCCESS: "✅",
                StageStatus.PARTIAL: "⚠️",
                StageStatus.FAILED: "❌",
                StageStatus.SKIPPED: "⏭️",
            }.get(stage_result.status, "❓")
            duration = (
                f" ({stage_result.duration_seconds:.2f}s)" if stage_result.duration_seconds > 0 else ""
            )
            self.logger.info(f"   {icon} {stage_name.title()}: {stage_result.status.value}{duration}")
            if stage_result.error:
                self.logger.info(f"      Error: {stage_result.error}")

        report = result.context.stage_results.get("report")
        if report and report.data.get("deltas"):
            self.logger.info("📈 Avg OOD vs best model (pp):")
            for label, delta in report.data["deltas"].items():
                self.logger.info(f"   {label}: {delta:+.2f}")

        if result.file_paths:
            self.logger.info(f"📁 Files Generated: {len(result.file_paths)}")
            for file_type, file_path in result.file_paths.items():
                self.logger.debug(f"   📄 {file_type}: {file_path}")

        self.logger.info("=" * 40)
