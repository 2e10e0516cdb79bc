"""Soup stage: fuse the pool with every method and manifold variant."""

from typing import Optional

from src.bench import BenchEvaluator
from src.exceptions import SoupKitError
from src.models.enums import SoupMethod
from src.partition import auto_partition
from src.soups import soup_registry
from src.utils.pipeline_persistence import save_soup

from .base_stage import ExperimentContext, PipelineStage, StageResult


def manifold_variant(m: int) -> str:
    return f"{SoupMethod.MANIFOLD.value}-m{m}"


class SoupStage(PipelineStage):
    """Stage 3: uniform, greedy and manifold soups at each component count."""

    def __init__(self):
        super().__init__("soup")

    def _variants(self, context: ExperimentContext) -> list[tuple[str, dict]]:
        evaluator = BenchEvaluator(context.bundle)
        variants = [
            (SoupMethod.UNIFORM.value, {"method": SoupMethod.UNIFORM, "evaluator": evaluator}),
            (SoupMethod.GREEDY.value, {"method": SoupMethod.GREEDY, "evaluator": evaluator}),
        ]
        names = context.pool[0].params.names
        for m in context.manifold_variants:
            if m > len(names):
                self.logger.warning(f"Skipping m={m}: model has only {len(names)} tensors")
                continue
            variants.append(
                (
                    manifold_variant(m),
                    {
                        "method": SoupMethod.MANIFOLD,
                        "evaluator": evaluator,
                        "partition": auto_partition(names, m, context.partition_strategy),
                        "tau": context.tau,
                        "budget": context.budget,
                        "seed": context.soup_seed,
                        "solver": context.solver,
                    },
                )
            )
        return variants

    def execute(self, context: ExperimentContext) -> StageResult:
        if context.pool is None or context.bundle is None:
            return self._create_skipped_result("no trained pool")

        file_paths: dict[str, str] = {}
        metrics: dict[str, dict] = {}
        failures: list[str] = []
        first_error: Optional[BaseException] = None
        for variant, options in self._variants(context):
            method = options.pop("method")
            try:
                soup = soup_registry.create(method, **options)
                fused, report = soup.run(context.pool)
                file_paths[f"soup:{variant}"] = save_soup(
                    fused, report, context.persistence.soup_dir(variant)
                )
            except (SoupKitError, OSError) as e:
                self.logger.error(f"Soup '{variant}' failed: {e}")
                failures.append(variant)
                first_error = first_error or e
                continue
            context.soups[variant] = (fused, report)
            metrics[variant] = {
                "k": report.k,
                "val_acc": report.val_acc,
                "evaluations": report.total_evaluations,
            }

        if not context.soups:
            self.logger.error(f"every soup failed: {failures}")
            return self._create_error_result(first_error or SoupKitError("no soup variants to run"))
        if failures:
            return self._create_partial_result(
                file_paths=file_paths,
                metrics=metrics,
                error=f"failed soups: {failures}",
                exception=first_error,
            )
        return self._create_success_result(file_paths=file_paths, metrics=metrics)
