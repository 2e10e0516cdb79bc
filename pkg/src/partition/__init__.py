"""Tensor partitions and component-wise mixing."""

from .partitioner import (
    auto_partition,
    load_partition,
    mix_components,
    parse_auto_partition,
    save_partition,
    validate,
)

__all__ = [
    "validate",
    "auto_partition",
    "mix_components",
    "load_partition",
    "save_partition",
    "parse_auto_partition",
]
