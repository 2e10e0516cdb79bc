"""Feed-forward ReLU classifier over a ParameterSet.

Tensor layout (torch-style, weight rows are output units):
    layers.{i}.weight  [hidden_i, fan_in]
    layers.{i}.bias    [hidden_i]
    head.weight        [num_classes, hidden_last]
    head.bias          [num_classes]

The forward pass runs in float64 on float32 weights, so predictions are a
deterministic function of the stored parameters.
"""

import re
from dataclasses import dataclass

import numpy as np

from src.exceptions import SchemaMismatchError
from src.models.parameter_set import ParameterSet, Schema

_LAYER_WEIGHT = re.compile(r"^layers\.(\d+)\.weight$")


@dataclass(frozen=True)
class MLPArchitecture:
    """Layer sizes of a bench classifier."""

    input_dim: int
    hidden_sizes: tuple[int, ...]
    num_classes: int

    @property
    def layer_sizes(self) -> list[tuple[int, int]]:
        """(fan_out, fan_in) per hidden layer."""
        fan_ins = [self.input_dim, *self.hidden_sizes[:-1]]
        return list(zip(self.hidden_sizes, fan_ins))

    def schema(self) -> Schema:
        entries: list[tuple[str, tuple[int, ...]]] = []
        for i, (fan_out, fan_in) in enumerate(self.layer_sizes):
            entries.append((f"layers.{i}.weight", (fan_out, fan_in)))
            entries.append((f"layers.{i}.bias", (fan_out,)))
        last = self.hidden_sizes[-1] if self.hidden_sizes else self.input_dim
        entries.append(("head.weight", (self.num_classes, last)))
        entries.append(("head.bias", (self.num_classes,)))
        return tuple(entries)

    @classmethod
    def from_params(cls, params: ParameterSet) -> "MLPArchitecture":
        """Recover the architecture from tensor names and shapes.

        Raises:
            SchemaMismatchError: the parameters are not a bench classifier
        """
        hidden: list[int] = []
        input_dim = None
        for name in params:
            match = _LAYER_WEIGHT.match(name)
            if match:
                if int(match.group(1)) != len(hidden):
                    raise SchemaMismatchError(f"unexpected layer order at '{name}'")
                fan_out, fan_in = params[name].shape
                if input_dim is None:
                    input_dim = fan_in
                hidden.append(fan_out)
        if "head.weight" not in params:
            raise SchemaMismatchError("parameters have no 'head.weight' tensor")
        num_classes, head_in = params["head.weight"].shape
        arch = cls(
            input_dim=int(head_in if input_dim is None else input_dim),
            hidden_sizes=tuple(int(h) for h in hidden),
            num_classes=int(num_classes),
        )
        if params.schema != arch.schema():
            raise SchemaMismatchError(
                f"parameters do not match a {arch.input_dim}-{list(arch.hidden_sizes)}-"
                f"{arch.num_classes} classifier"
            )
        return arch


def hidden_features(params: ParameterSet, features: np.ndarray, depth: int) -> np.ndarray:
    """Activations after the first `depth` hidden layers."""
    h = np.asarray(features, dtype=np.float64)
    for i in range(depth):
        weight = params[f"layers.{i}.weight"].astype(np.float64)
        bias = params[f"layers.{i}.bias"].astype(np.float64)
        h = np.maximum(h @ weight.T + bias, 0.0)
    return h


def logits(params: ParameterSet, features: np.ndarray) -> np.ndarray:
    """Class scores [n, num_classes]."""
    depth = len(MLPArchitecture.from_params(params).hidden_sizes)
    h = hidden_features(params, features, depth)
    return h @ params["head.weight"].astype(np.float64).T + params["head.bias"].astype(np.float64)


def predict(params: ParameterSet, features: np.ndarray) -> np.ndarray:
    """Top-1 class per row; ties go to the lowest class index."""
    return np.argmax(logits(params, features), axis=1)
