"""Model pool: the finetuned ingredients of a soup."""

from dataclasses import dataclass, field
from typing import Any, Optional

from src.exceptions import SchemaMismatchError
from src.models.parameter_set import ParameterSet


@dataclass
class PoolMember:
    """One finetuned model with its validation accuracy (None until evaluated)."""

    id: str
    params: ParameterSet
    val_acc: Optional[float] = None
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass
class ModelPool:
    """Ingredient checkpoints plus their validation accuracies.

    All members share one schema. When `sorted` is set, validation accuracy is
    non-increasing so index 0 is the best model.
    """

    members: list[PoolMember]
    sorted: bool = False
    failures: list[dict[str, Any]] = field(default_factory=list)

    def __post_init__(self):
        ids = [member.id for member in self.members]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Duplicate model ids in pool: {ids}")
        if self.members:
            reference = self.members[0].params
            for member in self.members[1:]:
                reference.assert_same_schema(member.params, context=f"pool member '{member.id}'")
        if self.sorted:
            accs = [member.val_acc for member in self.members]
            if any(acc is None for acc in accs) or any(
                a < b for a, b in zip(accs, accs[1:])
            ):
                raise ValueError("Pool flagged sorted but accuracies are missing or increasing")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, index: int) -> PoolMember:
        return self.members[index]

    @property
    def ids(self) -> list[str]:
        return [member.id for member in self.members]

    @property
    def schema(self):
        if not self.members:
            raise SchemaMismatchError("Empty pool has no schema")
        return self.members[0].params.schema

    def params(self) -> list[ParameterSet]:
        return [member.params for member in self.members]
