"""Partition a model's tensors into components and mix two models component-wise."""

from collections.abc import Sequence
from pathlib import Path
from typing import Union

import numpy as np

from src.exceptions import (
    ComponentIndexError,
    ConfigurationError,
    EmptyComponentError,
    PartitionTooFineError,
    UnassignedTensorError,
    UnknownTensorError,
)
from src.models.enums import PartitionStrategy
from src.models.parameter_set import ParameterSet
from src.models.partition_spec import MixingVector, PartitionSpec
from src.tensor_store.arithmetic import combine_arrays
from src.utils.file_utils import load_json_file, save_json_to_file


def validate(spec: PartitionSpec, schema: Sequence[str]) -> None:
    """Check a partition against a model's tensor names.

    Checks run in a fixed order so the first offender is reported:
    component index range, unknown tensors, unassigned tensors, empty components.

    Raises:
        ComponentIndexError: an index outside 1..m
        UnknownTensorError: assignment names a tensor the model does not have
        UnassignedTensorError: a model tensor has no component
        EmptyComponentError: a component index has no tensor
    """
    if spec.m < 1:
        raise PartitionTooFineError(f"partition must have m >= 1, got {spec.m}")
    for name, component in spec.assignment.items():
        if not isinstance(component, int) or isinstance(component, bool) or not 1 <= component <= spec.m:
            raise ComponentIndexError(name, component, spec.m)

    names = list(schema)
    known = set(names)
    for name in spec.assignment:
        if name not in known:
            raise UnknownTensorError(name)
    for name in names:
        if name not in spec.assignment:
            raise UnassignedTensorError(name)

    used = set(spec.assignment.values())
    for component in range(1, spec.m + 1):
        if component not in used:
            raise EmptyComponentError(component)


def _contiguous_blocks(names: list[str], m: int) -> list[list[str]]:
    """Split into m runs; earlier runs take the remainder."""
    base, extra = divmod(len(names), m)
    blocks, start = [], 0
    for j in range(m):
        size = base + (1 if j < extra else 0)
        blocks.append(names[start:start + size])
        start += size
    return blocks


def _prefix_groups(names: list[str], depth: int) -> list[list[str]]:
    """Maximal runs of adjacent tensors sharing the first `depth` parent segments.

    depth=None groups by full tensor name, i.e. one tensor per group.
    """
    groups: list[list[str]] = []
    previous = object()
    for name in names:
        if depth is None:
            key: object = name
        else:
            key = tuple(name.split(".")[:-1][:depth])
        if groups and key == previous:
            groups[-1].append(name)
        else:
            groups.append([name])
        previous = key
    return groups


def _merge_smallest_adjacent(groups: list[list[str]], m: int) -> list[list[str]]:
    """Merge the adjacent pair with the smallest combined size until m groups remain."""
    groups = [list(g) for g in groups]
    while len(groups) > m:
        sizes = [len(groups[i]) + len(groups[i + 1]) for i in range(len(groups) - 1)]
        i = sizes.index(min(sizes))
        groups[i:i + 2] = [groups[i] + groups[i + 1]]
    return groups


def _by_name_prefix(names: list[str], m: int) -> list[list[str]]:
    max_depth = max(len(name.split(".")) - 1 for name in names)
    for depth in [*range(1, max_depth + 1), None]:
        groups = _prefix_groups(names, depth)
        if len(groups) >= m:
            return _merge_smallest_adjacent(groups, m)
    raise PartitionTooFineError(f"by-name-prefix cannot produce {m} components")


def auto_partition(
    schema: Sequence[str],
    m: int,
    strategy: Union[PartitionStrategy, str] = PartitionStrategy.CONTIGUOUS_BLOCKS,
) -> PartitionSpec:
    """Build a deterministic partition of an ordered tensor list into m components.

    Args:
        schema: Tensor names in model order
        m: Number of components
        strategy: contiguous-blocks or by-name-prefix

    Returns:
        Valid PartitionSpec; labels record the grouped tensor prefixes

    Raises:
        PartitionTooFineError: m < 1 or more components than the strategy can produce
    """
    strategy = PartitionStrategy(strategy)
    names = list(schema)
    if m < 1:
        raise PartitionTooFineError(f"m must be >= 1, got {m}")
    if m > len(names):
        raise PartitionTooFineError(
            f"cannot split {len(names)} tensors into {m} components"
        )

    if strategy is PartitionStrategy.CONTIGUOUS_BLOCKS:
        blocks = _contiguous_blocks(names, m)
    else:
        blocks = _by_name_prefix(names, m)

    assignment = {name: j for j, block in enumerate(blocks, start=1) for name in block}
    labels = tuple(_block_label(block) for block in blocks)
    spec = PartitionSpec(m=m, assignment=assignment, labels=labels)
    validate(spec, names)
    return spec


def _block_label(block: list[str]) -> str:
    if len(block) == 1:
        return block[0]
    return f"{block[0]}..{block[-1]}"


def mix_components(
    psi: ParameterSet,
    theta: ParameterSet,
    spec: PartitionSpec,
    lam: Union[MixingVector, Sequence[float], np.ndarray],
) -> ParameterSet:
    """Component-wise convex combination lam^j * psi + (1 - lam^j) * theta.

    A factor of exactly 1 (or 0) reproduces psi (or theta) bit for bit on its
    component.

    Raises:
        SchemaMismatchError: psi and theta differ
        PartitionError: spec invalid for the schema
        BoundViolationError / MixingLengthError: invalid mixing vector
    """
    psi.assert_same_schema(theta, context="mix_components")
    validate(spec, psi.names)
    factors = MixingVector.coerce(lam, spec.m)

    entries = []
    for name in psi:
        weight = factors[spec.assignment[name] - 1]
        entries.append((name, combine_arrays(weight, psi[name], 1.0 - weight, theta[name])))
    return ParameterSet(entries)


# ===== Partition files and CLI parsing =====


def load_partition(path: Union[str, Path]) -> PartitionSpec:
    """Read a partition JSON file {m, label?, assignment}."""
    try:
        data = load_json_file(path)
    except ValueError as e:
        raise ConfigurationError(f"Partition file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Partition file {path} must hold a JSON object")
    return PartitionSpec.from_dict(data)


def save_partition(spec: PartitionSpec, path: Union[str, Path]) -> str:
    """Write a partition JSON file."""
    return save_json_to_file(spec.to_dict(), path)


def parse_auto_partition(value: str) -> tuple[int, PartitionStrategy]:
    """Parse the CLI form ``M:STRATEGY`` (strategy defaults to contiguous-blocks)."""
    count, _, strategy = value.partition(":")
    try:
        m = int(count)
        return m, PartitionStrategy(strategy or PartitionStrategy.CONTIGUOUS_BLOCKS.value)
    except ValueError as e:
        raise ConfigurationError(
            f"--auto expects M:STRATEGY with STRATEGY in "
            f"{[s.value for s in PartitionStrategy]}, got '{value}'"
        ) from e
