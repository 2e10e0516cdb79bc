"""Greedy soup: add models best-first, keeping each only if it helps."""

from src.models.enums import SoupMethod
from src.models.parameter_set import ParameterSet
from src.models.pool import ModelPool
from src.models.soup_report import CandidateRecord, SoupReport
from src.soups.base_soup import BaseSoup
from src.tensor_store.arithmetic import mean


class GreedySoup(BaseSoup):
    """Sequential uniform averaging with a strict-improvement acceptance test."""

    method = SoupMethod.GREEDY.value

    def _run(self, pool: ModelPool, report: SoupReport) -> ParameterSet:
        ordered = self._sorted(pool, report)
        ingredients = [ordered[0].params]
        soup = ordered[0].params
        acc = ordered[0].val_acc
        report.val_acc = acc
        report.trajectory = [acc]

        for member in ordered.members[1:]:
            record = CandidateRecord(id=member.id, acc_before=acc)
            report.candidates.append(record)

            candidate = mean(ingredients + [member.params])
            with self.counter.phase("accept"):
                record.acc_after = self.counter.evaluate(candidate)

            if record.acc_after > acc:
                record.accepted = True
                ingredients.append(member.params)
                soup, acc = candidate, record.acc_after
                report.k = len(ingredients)
                report.val_acc = acc
                report.trajectory.append(acc)
            self.logger.log_candidate(member.id, record.accepted, record.acc_before, record.acc_after)

        return soup
