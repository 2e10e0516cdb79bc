"""Uniform soup: the elementwise mean of every pool member."""

from src.models.enums import SoupMethod
from src.models.parameter_set import ParameterSet
from src.models.pool import ModelPool
from src.models.soup_report import CandidateRecord, SoupReport
from src.soups.base_soup import BaseSoup
from src.tensor_store.arithmetic import mean


class UniformSoup(BaseSoup):
    """Average all models; the evaluator, if given, only scores the result."""

    method = SoupMethod.UNIFORM.value
    requires_evaluator = False

    def _run(self, pool: ModelPool, report: SoupReport) -> ParameterSet:
        report.ordering = pool.ids
        report.candidates = [
            CandidateRecord(id=member.id, acc_before=member.val_acc, accepted=True)
            for member in pool.members[1:]
        ]
        report.k = len(pool)

        fused = mean(pool.params())
        if self.counter is not None:
            with self.counter.phase("final"):
                report.val_acc = self.counter.evaluate(fused)
            report.trajectory = [report.val_acc]
        return fused
