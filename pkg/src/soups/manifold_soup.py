"""Manifold mixing soup.

Models are visited best-first. Each candidate first has to pass the cheap
approximate-average gate; a passing candidate is then mixed into the soup
component by component, with the mixing vector found by derivative-free
optimization of validation accuracy. The mix replaces the soup only if it
strictly improves validation accuracy.
"""

from src.app_config import AppConfig
from src.models.enums import SoupMethod
from src.models.parameter_set import ParameterSet
from src.models.partition_spec import PartitionSpec
from src.models.pool import ModelPool
from src.models.soup_report import CandidateRecord, SoupReport
from src.partition import validate
from src.soups.base_soup import BaseSoup
from src.soups.evaluators import Evaluator
from src.soups.operations import approx_average_gate, optimize_mixing
from src.utils.seeding import derive_seed


class ManifoldMixSoup(BaseSoup):
    """Gate, optimize and accept candidates over a partition of the model's tensors."""

    method = SoupMethod.MANIFOLD.value

    def __init__(
        self,
        evaluator: Evaluator,
        partition: PartitionSpec,
        tau: float = AppConfig.SOUP_DEFAULT_TAU,
        budget: int = AppConfig.SOUP_DEFAULT_BUDGET,
        seed: int = AppConfig.SOUP_DEFAULT_SEED,
        solver: str = AppConfig.DFO_DEFAULT_SOLVER,
        initial_radius: float = AppConfig.DFO_INITIAL_RADIUS,
        final_radius: float = AppConfig.DFO_FINAL_RADIUS,
    ):
        super().__init__(evaluator)
        if not 0.0 <= tau <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {tau}")
        if budget < 1:
            raise ValueError(f"budget must be >= 1, got {budget}")
        self.partition = partition
        self.tau = tau
        self.budget = budget
        self.seed = seed
        self.solver = solver
        self.initial_radius = initial_radius
        self.final_radius = final_radius

    def _new_report(self) -> SoupReport:
        return SoupReport(
            method=self.method,
            tau=self.tau,
            budget=self.budget,
            seed=self.seed,
            solver=self.solver,
            partition_m=self.partition.m,
        )

    def run(self, pool: ModelPool) -> tuple[ParameterSet, SoupReport]:
        """Fuse the pool.

        Raises:
            PartitionError: the partition does not fit the pool's schema
            SoupAbortedError: a gate, optimization or evaluation failed
        """
        if len(pool):
            validate(self.partition, pool[0].params.names)
        return super().run(pool)

    def _run(self, pool: ModelPool, report: SoupReport) -> ParameterSet:
        ordered = self._sorted(pool, report)

        psi = ordered[0].params
        acc = ordered[0].val_acc
        k = 1
        report.val_acc = acc
        report.trajectory = [acc]

        for position, member in enumerate(ordered.members[1:], start=1):
            theta = member.params
            record = CandidateRecord(id=member.id, acc_before=acc)
            report.candidates.append(record)

            with self.counter.phase("gate"):
                record.gate_pass, record.gate_acc = approx_average_gate(
                    psi, theta, k, self.counter, self.tau, psi_acc=acc
                )
            if not record.gate_pass:
                self.logger.debug(
                    f"Candidate {member.id} skipped at gate: "
                    f"{record.gate_acc:.4f} <= {self.tau} * {acc:.4f}"
                )
                continue

            before = self.counter.counts["optimize"]
            with self.counter.phase("optimize"):
                lambda_star, psi_star, acc_star = optimize_mixing(
                    psi,
                    theta,
                    self.partition,
                    k,
                    self.counter,
                    budget=self.budget,
                    seed=derive_seed(self.seed, "candidate", position),
                    solver=self.solver,
                    initial_radius=self.initial_radius,
                    final_radius=self.final_radius,
                )
            record.optimizer_evaluations = self.counter.counts["optimize"] - before
            record.lambda_star = list(lambda_star.values)
            record.acc_after = acc_star

            # The soup accuracy is carried forward, never re-evaluated
            if acc_star > acc:
                record.accepted = True
                psi, acc, k = psi_star, acc_star, k + 1
                report.k = k
                report.val_acc = acc
                report.trajectory.append(acc)
            self.logger.log_candidate(member.id, record.accepted, record.acc_before, acc_star)

        return psi
