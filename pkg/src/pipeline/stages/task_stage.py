"""Task stage: materialize the synthetic dataset bundle."""

from src.bench import make_task, save_bundle
from src.exceptions import SoupKitError

from .base_stage import ExperimentContext, PipelineStage, StageResult


class TaskStage(PipelineStage):
    """Stage 1: generate train/val/test splits and the shifted test sets."""

    def __init__(self):
        super().__init__("task")

    def execute(self, context: ExperimentContext) -> StageResult:
        try:
            context.bundle = make_task(context.task)
            descriptor = save_bundle(context.bundle, context.persistence.task_dir)
        except (SoupKitError, OSError) as e:
            self.logger.error(f"Task generation failed: {e}")
            return self._create_error_result(e)

        return self._create_success_result(
            file_paths={"bundle": descriptor},
            metrics={"splits": len(context.bundle.splits), "shifts": len(context.bundle.shift_ids)},
        )
