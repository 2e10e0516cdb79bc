"""Accuracy evaluators used as the soup objective."""

from collections import Counter
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Protocol, runtime_checkable

from src.models.parameter_set import ParameterSet


@runtime_checkable
class Evaluator(Protocol):
    """Deterministic validation accuracy of a parameter set.

    `dataset_id` names the split the accuracy is measured on; the same
    parameters must always yield the same accuracy.
    """

    dataset_id: str

    def evaluate(self, params: ParameterSet) -> float: ...


class CountingEvaluator:
    """Wraps an evaluator and counts calls per soup phase.

    Usage:
        counter = CountingEvaluator(evaluator)
        with counter.phase("gate"):
            acc = counter.evaluate(candidate)
    """

    def __init__(self, inner: Evaluator):
        self.inner = inner
        self.dataset_id = inner.dataset_id
        self.counts: Counter[str] = Counter()
        self._phase = "unassigned"

    @contextmanager
    def phase(self, name: str) -> Iterator["CountingEvaluator"]:
        previous, self._phase = self._phase, name
        try:
            yield self
        finally:
            self._phase = previous

    def evaluate(self, params: ParameterSet) -> float:
        acc = float(self.inner.evaluate(params))
        self.counts[self._phase] += 1
        return acc

    @property
    def total(self) -> int:
        return sum(self.counts.values())
