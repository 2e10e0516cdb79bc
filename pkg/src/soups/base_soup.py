"""Base class for soup algorithms.

A soup consumes a model pool and produces one fused parameter set plus a
SoupReport. Evaluator calls go through a CountingEvaluator so that the
report's per-phase evaluation counts reconcile with the calls actually made.
"""

from abc import ABC, abstractmethod
from typing import Optional

from src.exceptions import SoupAbortedError, SoupKitError
from src.models.parameter_set import ParameterSet
from src.models.pool import ModelPool
from src.models.soup_report import SoupReport
from src.soups.evaluators import CountingEvaluator, Evaluator
from src.soups.operations import sort_pool
from src.utils.logging_utils import SoupLogger

EVALUATION_PHASES = ("sort", "gate", "optimize", "accept", "final")


class BaseSoup(ABC):
    """Base class for all soup algorithms."""

    method = "base"
    requires_evaluator = True

    def __init__(self, evaluator: Optional[Evaluator] = None):
        if evaluator is None and self.requires_evaluator:
            raise ValueError(f"{self.method} soup needs an evaluator")
        self.counter = CountingEvaluator(evaluator) if evaluator is not None else None
        self.logger = SoupLogger(self.__class__.__name__)

    def run(self, pool: ModelPool) -> tuple[ParameterSet, SoupReport]:
        """Fuse the pool.

        Returns:
            (fused parameters, report)

        Raises:
            SoupKitError: empty pool
            SoupAbortedError: a sub-operation failed; `report` holds the partial trace
        """
        if len(pool) == 0:
            raise SoupKitError("cannot make a soup from an empty pool")

        report = self._new_report()
        try:
            fused = self._run(pool, report)
        except Exception as e:
            self._close_report(report)
            self.logger.error(f"{self.method} soup aborted: {e}")
            raise SoupAbortedError(f"{self.method} soup aborted: {e}", report) from e

        self._close_report(report)
        self.logger.info(
            f"{self.method} soup: k={report.k}, val_acc={report.val_acc}, "
            f"{report.total_evaluations} evaluations"
        )
        return fused, report

    def _new_report(self) -> SoupReport:
        return SoupReport(method=self.method)

    def _close_report(self, report: SoupReport) -> None:
        counts = self.counter.counts if self.counter is not None else {}
        report.evaluations = {phase: int(counts.get(phase, 0)) for phase in EVALUATION_PHASES}
        for phase, count in report.evaluations.items():
            if count:
                self.logger.log_evaluations(phase, count)

    def _sorted(self, pool: ModelPool, report: SoupReport) -> ModelPool:
        with self.counter.phase("sort"):
            ordered = sort_pool(pool, self.counter)
        report.ordering = ordered.ids
        return ordered

    @abstractmethod
    def _run(self, pool: ModelPool, report: SoupReport) -> ParameterSet:
        """Fuse a non-empty pool, filling `report` as the run progresses."""
        pass
