"""Train stage: finetune the model pool from a shared initialization."""

from src.bench import train_pool
from src.exceptions import SoupKitError
from src.utils.pipeline_persistence import save_pool

from .base_stage import ExperimentContext, PipelineStage, StageResult


class TrainStage(PipelineStage):
    """Stage 2: train one model per grid config and save the pool."""

    def __init__(self):
        super().__init__("train")

    def execute(self, context: ExperimentContext) -> StageResult:
        if context.bundle is None:
            return self._create_skipped_result("no dataset bundle")

        try:
            pool = train_pool(context.bundle, context.grid, show_progress=context.show_progress)
            manifest = save_pool(pool, context.persistence.pool_dir)
        except (SoupKitError, OSError) as e:
            self.logger.error(f"Pool training failed: {e}")
            return self._create_error_result(e)

        metrics = {
            "trained": len(pool),
            "failed": len(pool.failures),
            "best_val_acc": max((m.val_acc for m in pool), default=None),
        }
        if len(pool) == 0:
            return self._create_error_result(SoupKitError("every training config diverged"))

        context.pool = pool
        if pool.failures:
            failed = ", ".join(f["config_id"] for f in pool.failures)
            return self._create_partial_result(
                file_paths={"pool": manifest}, metrics=metrics, error=f"diverged: {failed}"
            )
        return self._create_success_result(file_paths={"pool": manifest}, metrics=metrics)
