"""Evaluate stage: clean and shifted accuracies of every model and soup."""

from src.bench import evaluate_ood
from src.exceptions import SoupKitError
from src.utils.pipeline_persistence import save_eval_result

from .base_stage import ExperimentContext, PipelineStage, StageResult


class EvaluateStage(PipelineStage):
    """Stage 4: evaluate pool members and soups on the full dataset suite."""

    def __init__(self):
        super().__init__("evaluate")

    def execute(self, context: ExperimentContext) -> StageResult:
        if context.bundle is None or context.pool is None:
            return self._create_skipped_result("no pool to evaluate")

        targets = [(member.id, "model", member.params) for member in context.pool]
        targets += [
            (variant, report.method, fused) for variant, (fused, report) in context.soups.items()
        ]

        file_paths = {}
        try:
            for label, kind, params in targets:
                result = evaluate_ood(params, context.bundle, label=label)
                result.kind = kind
                context.eval_results[label] = result
                file_paths[f"eval:{label}"] = save_eval_result(
                    result, context.persistence.eval_path(label)
                )
        except (SoupKitError, OSError) as e:
            self.logger.error(f"Evaluation failed: {e}")
            return self._create_error_result(e)

        return self._create_success_result(
            file_paths=file_paths, metrics={"evaluated": len(context.eval_results)}
        )
