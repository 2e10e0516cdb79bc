"""Partition and mixing-vector models."""

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from src.exceptions import BoundViolationError, ConfigurationError, MixingLengthError


@dataclass(frozen=True)
class PartitionSpec:
    """Assignment of every model tensor to one of m components.

    Component indices are 1-based (j = 1..m). Validation against a concrete
    model schema lives in `src.partition.validate`.
    """

    m: int
    assignment: dict[str, int]
    labels: Optional[tuple[Optional[str], ...]] = None

    def components(self) -> list[list[str]]:
        """Tensor names per component, index 0 holding component 1."""
        groups: list[list[str]] = [[] for _ in range(self.m)]
        for name, component in self.assignment.items():
            if 1 <= component <= self.m:
                groups[component - 1].append(name)
        return groups

    def component_of(self, name: str) -> int:
        return self.assignment[name]

    def label(self, component: int) -> str:
        """Human-readable label of a 1-based component."""
        if self.labels and self.labels[component - 1]:
            return self.labels[component - 1]
        return f"C{component}"

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"m": self.m}
        if self.labels is not None:
            data["label"] = list(self.labels)
        data["assignment"] = dict(self.assignment)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PartitionSpec":
        """Build a spec from the JSON file layout {m, label?, assignment}."""
        try:
            m = int(data["m"])
            assignment = {str(k): int(v) for k, v in data["assignment"].items()}
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"Malformed partition spec: {e}") from e
        labels = data.get("label")
        if labels is not None:
            if not isinstance(labels, list) or len(labels) != m:
                raise ConfigurationError(f"Partition 'label' must be a list of {m} strings")
            labels = tuple(labels)
        return cls(m=m, assignment=assignment, labels=labels)


@dataclass(frozen=True)
class MixingVector:
    """Per-component convex-combination factors, each in [0, 1]."""

    values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        coerced = tuple(float(v) for v in self.values)
        for index, value in enumerate(coerced):
            # NaN fails both comparisons
            if not (0.0 <= value <= 1.0):
                raise BoundViolationError(index, value)
        object.__setattr__(self, "values", coerced)

    @classmethod
    def uniform(cls, m: int, value: float) -> "MixingVector":
        return cls(tuple([value] * m))

    @classmethod
    def coerce(cls, values: "Sequence[float] | np.ndarray | MixingVector", m: int) -> "MixingVector":
        """Validate arbitrary input as a mixing vector of length m."""
        vector = values if isinstance(values, MixingVector) else cls(tuple(np.asarray(values, dtype=float).ravel()))
        if len(vector) != m:
            raise MixingLengthError(len(vector), m)
        return vector

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64)
