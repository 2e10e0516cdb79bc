"""SoupReport: the full trace of one soup run."""

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class CandidateRecord:
    """Outcome of examining one candidate ingredient.

    Gate fields are only set by the manifold soup; `lambda_star` only when the
    optimizer ran; `acc_after` whenever a candidate soup was evaluated.
    """

    id: str
    acc_before: Optional[float] = None
    accepted: bool = False
    gate_acc: Optional[float] = None
    gate_pass: Optional[bool] = None
    lambda_star: Optional[list[float]] = None
    acc_after: Optional[float] = None
    optimizer_evaluations: int = 0

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "id": self.id,
            "gate_acc": self.gate_acc,
            "gate_pass": self.gate_pass,
        }
        if self.lambda_star is not None:
            data["lambda_star"] = list(self.lambda_star)
        data["acc_before"] = self.acc_before
        if self.acc_after is not None:
            data["acc_after"] = self.acc_after
        data["accepted"] = self.accepted
        if self.optimizer_evaluations:
            data["optimizer_evaluations"] = self.optimizer_evaluations
        return data


@dataclass
class SoupReport:
    """Ordering, per-candidate decisions, accuracy trajectory and evaluation counts.

    `k` counts the models mixed into the soup, starting at 1 for the first
    ingredient; `trajectory` holds the soup accuracy after the start and after
    every acceptance.
    """

    method: str
    ordering: list[str] = field(default_factory=list)
    tau: Optional[float] = None
    budget: Optional[int] = None
    seed: Optional[int] = None
    solver: Optional[str] = None
    partition_m: Optional[int] = None
    candidates: list[CandidateRecord] = field(default_factory=list)
    k: int = 1
    val_acc: Optional[float] = None
    trajectory: list[float] = field(default_factory=list)
    evaluations: dict[str, int] = field(
        default_factory=lambda: {"sort": 0, "gate": 0, "optimize": 0, "accept": 0, "final": 0}
    )
    checkpoint_path: Optional[str] = None

    @property
    def accepted_ids(self) -> list[str]:
        return [c.id for c in self.candidates if c.accepted]

    @property
    def total_evaluations(self) -> int:
        return sum(self.evaluations.values())

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": self.method,
            "tau": self.tau,
            "budget": self.budget,
            "seed": self.seed,
            "solver": self.solver,
            "partition_m": self.partition_m,
            "ordering": list(self.ordering),
            "candidates": [c.to_dict() for c in self.candidates],
            "trajectory": list(self.trajectory),
            "evaluations": dict(self.evaluations, total=self.total_evaluations),
            "final": {
                "k": self.k,
                "val_acc": self.val_acc,
                "checkpoint_path": self.checkpoint_path,
            },
        }
