"""Report stage: comparison table, soup-vs-best deltas and the ID/OOD chart."""

import dataclasses

from src.exceptions import SoupKitError
from src.models.bench import EvalResult
from src.models.enums import ReportFormat, SoupMethod
from src.reporting import ReportGenerator, pick_best_models

from .base_stage import ExperimentContext, PipelineStage, StageResult
from .soup_stage import manifold_variant


class ReportStage(PipelineStage):
    """Stage 5: best model, second-best model, uniform, greedy and manifold variants.

    The best individual model is the one with the highest validation
    accuracy; every soup's Avg OOD is reported relative to it.
    """

    def __init__(self):
        super().__init__("report")

    def comparison_rows(self, context: ExperimentContext) -> list[EvalResult]:
        rows = []
        models = pick_best_models(list(context.eval_results.values()))
        for title, result in zip(("Best model", "Second-best model"), models):
            rows.append(dataclasses.replace(result, label=f"{title} ({result.label})"))

        soup_titles = [
            (SoupMethod.UNIFORM.value, "Uniform soup"),
            (SoupMethod.GREEDY.value, "Greedy soup"),
        ] + [(manifold_variant(m), f"Manifold soup (m={m})") for m in context.manifold_variants]
        for variant, title in soup_titles:
            if variant in context.eval_results:
                rows.append(dataclasses.replace(context.eval_results[variant], label=title))
        return rows

    def execute(self, context: ExperimentContext) -> StageResult:
        if not context.eval_results:
            self.logger.warning("No evaluation results available for report generation")
            return self._create_skipped_result("no evaluation results")

        rows = self.comparison_rows(context)
        if not rows:
            return self._create_skipped_result("no model rows to compare")
        report_dir = context.persistence.report_dir
        try:
            generator = ReportGenerator(rows, reference_label=rows[0].label)
            file_paths = {
                "report_md": generator.save(report_dir, ReportFormat.MARKDOWN),
                "report_json": generator.save(report_dir, ReportFormat.JSON),
            }
            chart = generator.save_chart(report_dir)
            if chart:
                file_paths["chart"] = chart
        except (SoupKitError, OSError, ValueError) as e:
            self.logger.error(f"Report generation failed: {e}")
            return self._create_error_result(e)

        return self._create_success_result(
            data={"report_content": generator.render_markdown(), "deltas": generator.avg_ood_deltas()},
            file_paths=file_paths,
            metrics={"rows": len(rows)},
        )
