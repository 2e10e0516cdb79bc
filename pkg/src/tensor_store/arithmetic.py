"""Elementwise arithmetic on parameter sets.

All operations accumulate in float64 and round once to float32 on store.
Schemas must match exactly; nothing is broadcast.
"""

from collections.abc import Sequence

import numpy as np

from src.models.parameter_set import ParameterSet


def combine_arrays(a: float, x: np.ndarray, b: float, y: np.ndarray) -> np.ndarray:
    """Return float32(a * x + b * y), computed in float64.

    A zero coefficient drops its term entirely so that (1, x, 0, y) returns x
    bit for bit, signed zeros included.
    """
    if b == 0.0:
        result = a * x.astype(np.float64)
    elif a == 0.0:
        result = b * y.astype(np.float64)
    else:
        result = a * x.astype(np.float64) + b * y.astype(np.float64)
    return result.astype(np.float32)


def lincomb(a: float, x: ParameterSet, b: float, y: ParameterSet) -> ParameterSet:
    """Two-term linear combination a*x + b*y, tensor by tensor.

    Args:
        a: Coefficient of x
        x: First parameter set
        b: Coefficient of y
        y: Second parameter set, same names, shapes and order as x

    Returns:
        New parameter set

    Raises:
        SchemaMismatchError: x and y differ in names, shapes or order
        NonFiniteValueError: the result overflowed
    """
    x.assert_same_schema(y, context="lincomb")
    return ParameterSet((name, combine_arrays(a, x[name], b, y[name])) for name in x)


def mean(pool: Sequence[ParameterSet]) -> ParameterSet:
    """Elementwise arithmetic mean of a non-empty list of parameter sets.

    Raises:
        ValueError: empty list
        SchemaMismatchError: schemas differ
    """
    if not pool:
        raise ValueError("mean() of an empty pool")
    first = pool[0]
    for index, other in enumerate(pool[1:], start=1):
        first.assert_same_schema(other, context=f"mean() member {index}")

    count = float(len(pool))
    entries = []
    for name in first:
        total = first[name].astype(np.float64)
        for ps in pool[1:]:
            total += ps[name]
        entries.append((name, (total / count).astype(np.float32)))
    return ParameterSet(entries)


__all__ = ["combine_arrays", "lincomb", "mean"]
