"""Partition validation, auto-partitioning and component-wise mixing."""

import numpy as np
import pytest

from src.exceptions import (
    BoundViolationError,
    ComponentIndexError,
    ConfigurationError,
    EmptyComponentError,
    MixingLengthError,
    PartitionTooFineError,
    UnassignedTensorError,
    UnknownTensorError,
)
from src.models import MixingVector, PartitionSpec
from src.models.enums import PartitionStrategy
from src.partition import (
    auto_partition,
    load_partition,
    mix_components,
    parse_auto_partition,
    save_partition,
    validate,
)

from .conftest import random_params

MLP_NAMES = [
    "layers.0.weight",
    "layers.0.bias",
    "layers.1.weight",
    "layers.1.bias",
    "layers.2.weight",
    "layers.2.bias",
    "head.weight",
    "head.bias",
]


def _components(spec: PartitionSpec) -> list[list[str]]:
    return spec.components()


@pytest.mark.parametrize(
    "assignment, m, error",
    [
        ({"a": 1, "b": 3}, 2, ComponentIndexError),
        ({"a": 0, "b": 1}, 2, ComponentIndexError),
        ({"a": 1, "b": 2, "c": 1}, 2, UnknownTensorError),
        ({"a": 1}, 1, UnassignedTensorError),
        ({"a": 1, "b": 1}, 2, EmptyComponentError),
        ({"a": 1, "b": 1}, 0, PartitionTooFineError),
    ],
)
def test_validate_reports_first_offender(assignment, m, error):
    with pytest.raises(error):
        validate(PartitionSpec(m=m, assignment=assignment), ["a", "b"])


def test_error_messages_name_the_offender():
    with pytest.raises(UnassignedTensorError, match="unassigned tensor b"):
        validate(PartitionSpec(m=1, assignment={"a": 1}), ["a", "b"])
    with pytest.raises(EmptyComponentError, match="empty component 2"):
        validate(PartitionSpec(m=2, assignment={"a": 1, "b": 1}), ["a", "b"])


def test_contiguous_blocks_front_load_the_remainder():
    spec = auto_partition(MLP_NAMES, 3)
    assert [len(c) for c in _components(spec)] == [3, 3, 2]
    assert spec.labels[0] == "layers.0.weight..layers.1.weight"
    assert auto_partition(MLP_NAMES, 3) == spec


def test_single_and_finest_partitions():
    one = auto_partition(MLP_NAMES, 1)
    assert set(one.assignment.values()) == {1}
    finest = auto_partition(MLP_NAMES, len(MLP_NAMES))
    assert [finest.assignment[name] for name in MLP_NAMES] == list(range(1, 9))
    with pytest.raises(PartitionTooFineError):
        auto_partition(MLP_NAMES, 9)
    with pytest.raises(PartitionTooFineError):
        auto_partition(MLP_NAMES, 0)


def test_by_name_prefix_groups_layers():
    strategy = PartitionStrategy.BY_NAME_PREFIX
    two = auto_partition(MLP_NAMES, 2, strategy)
    assert _components(two) == [MLP_NAMES[:6], MLP_NAMES[6:]]

    four = auto_partition(MLP_NAMES, 4, strategy)
    assert _components(four) == [MLP_NAMES[0:2], MLP_NAMES[2:4], MLP_NAMES[4:6], MLP_NAMES[6:8]]

    # four layer groups merged down to three: the earliest smallest pair goes first
    three = auto_partition(MLP_NAMES, 3, strategy)
    assert _components(three) == [MLP_NAMES[0:4], MLP_NAMES[4:6], MLP_NAMES[6:8]]

    eight = auto_partition(MLP_NAMES, 8, strategy)
    assert _components(eight) == [[name] for name in MLP_NAMES]


def test_mix_boundaries_are_bitwise():
    psi, theta = random_params(1), random_params(2)
    spec = auto_partition(psi.names, 2)
    assert mix_components(psi, theta, spec, [1.0, 1.0]) == psi
    assert mix_components(psi, theta, spec, [0.0, 0.0]) == theta

    mixed = mix_components(psi, theta, spec, [1.0, 0.0])
    first, second = _components(spec)
    for name in first:
        assert np.array_equal(mixed[name], psi[name])
    for name in second:
        assert np.array_equal(mixed[name], theta[name])


def test_mix_stays_between_endpoints():
    psi, theta = random_params(3), random_params(4)
    spec = auto_partition(psi.names, 4)
    mixed = mix_components(psi, theta, spec, MixingVector((0.3, 0.9, 0.5, 0.01)))
    for name in mixed:
        lo = np.minimum(psi[name], theta[name])
        hi = np.maximum(psi[name], theta[name])
        assert np.all(mixed[name] >= lo - 1e-6)
        assert np.all(mixed[name] <= hi + 1e-6)


def test_invalid_mixing_vectors():
    psi, theta = random_params(5), random_params(6)
    spec = auto_partition(psi.names, 2)
    with pytest.raises(BoundViolationError):
        mix_components(psi, theta, spec, [1.5, 0.5])
    with pytest.raises(BoundViolationError):
        mix_components(psi, theta, spec, [float("nan"), 0.5])
    with pytest.raises(MixingLengthError):
        mix_components(psi, theta, spec, [0.5])


def test_parse_auto_partition():
    assert parse_auto_partition("8:contiguous-blocks") == (8, PartitionStrategy.CONTIGUOUS_BLOCKS)
    assert parse_auto_partition("4:by-name-prefix") == (4, PartitionStrategy.BY_NAME_PREFIX)
    assert parse_auto_partition("3") == (3, PartitionStrategy.CONTIGUOUS_BLOCKS)
    for bad in ("x:contiguous-blocks", "4:bogus"):
        with pytest.raises(ConfigurationError):
            parse_auto_partition(bad)


def test_partition_file_roundtrip(tmp_path):
    spec = auto_partition(MLP_NAMES, 4)
    path = save_partition(spec, tmp_path / "partition.json")
    assert load_partition(path) == spec

    broken = tmp_path / "broken.json"
    broken.write_text('{"m": 2', encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_partition(broken)
