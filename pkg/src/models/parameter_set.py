"""ParameterSet: the weights of one model as an ordered set of named float32 tensors."""

import hashlib
from collections.abc import Iterable, Iterator, Mapping
from typing import Union

import numpy as np

from src.exceptions import NonFiniteValueError, SchemaMismatchError

TensorEntries = Union[Mapping[str, np.ndarray], Iterable[tuple[str, np.ndarray]]]
Schema = tuple[tuple[str, tuple[int, ...]], ...]


class ParameterSet:
    """Ordered, immutable collection of named float32 tensors.

    Invariants enforced at construction:
    - names are unique and non-empty
    - every tensor is float32, C-contiguous and read-only
    - all values are finite
    - entry order is the insertion order and never changes
    """

    __slots__ = ("_tensors",)

    def __init__(self, entries: TensorEntries):
        items = entries.items() if isinstance(entries, Mapping) else entries
        tensors: dict[str, np.ndarray] = {}
        for name, value in items:
            if not isinstance(name, str) or not name:
                raise ValueError(f"Tensor names must be non-empty strings, got {name!r}")
            if name in tensors:
                raise ValueError(f"Duplicate tensor name '{name}'")
            array = np.array(value, dtype=np.float32, order="C", copy=True)
            if any(dim <= 0 for dim in array.shape):
                raise ValueError(f"Tensor '{name}' has a non-positive dimension {list(array.shape)}")
            if not np.all(np.isfinite(array)):
                raise NonFiniteValueError(name)
            array.setflags(write=False)
            tensors[name] = array
        self._tensors = tensors

    # ===== Mapping-like access =====

    def __getitem__(self, name: str) -> np.ndarray:
        return self._tensors[name]

    def __contains__(self, name: object) -> bool:
        return name in self._tensors

    def __iter__(self) -> Iterator[str]:
        return iter(self._tensors)

    def __len__(self) -> int:
        return len(self._tensors)

    def items(self):
        return self._tensors.items()

    @property
    def names(self) -> list[str]:
        return list(self._tensors)

    @property
    def schema(self) -> Schema:
        """(name, shape) pairs in entry order."""
        return tuple((name, tuple(t.shape)) for name, t in self._tensors.items())

    @property
    def num_parameters(self) -> int:
        return int(sum(t.size for t in self._tensors.values()))

    # ===== Comparison =====

    def __eq__(self, other: object) -> bool:
        """Bitwise equality: same schema and identical float32 bit patterns."""
        if not isinstance(other, ParameterSet):
            return NotImplemented
        if self.schema != other.schema:
            return False
        return all(
            np.array_equal(self[name].view(np.uint32), other[name].view(np.uint32))
            for name in self
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ParameterSet({len(self)} tensors, {self.num_parameters} parameters)"

    def assert_same_schema(self, other: "ParameterSet", context: str = "") -> None:
        """Raise SchemaMismatchError unless names, shapes and order all match.

        Args:
            other: Parameter set to compare against
            context: Optional prefix for the error message
        """
        if self.schema == other.schema:
            return
        prefix = f"{context}: " if context else ""
        mine, theirs = self.schema, other.schema
        if len(mine) != len(theirs):
            raise SchemaMismatchError(
                f"{prefix}tensor count differs ({len(mine)} vs {len(theirs)})"
            )
        for (name_a, shape_a), (name_b, shape_b) in zip(mine, theirs):
            if name_a != name_b:
                raise SchemaMismatchError(
                    f"{prefix}tensor order/name differs: '{name_a}' vs '{name_b}'"
                )
            if shape_a != shape_b:
                raise SchemaMismatchError(
                    f"{prefix}shape of '{name_a}' differs: {list(shape_a)} vs {list(shape_b)}"
                )

    # ===== Helpers =====

    def digest(self) -> str:
        """SHA-256 hex digest over names, shapes and raw little-endian bytes."""
        h = hashlib.sha256()
        for name, tensor in self._tensors.items():
            h.update(name.encode("utf-8"))
            h.update(repr(tuple(tensor.shape)).encode("ascii"))
            h.update(tensor.astype("<f4", copy=False).tobytes())
        return h.hexdigest()
