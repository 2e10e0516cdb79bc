"""Named-tensor checkpoints: bit-exact storage and float64-accumulating arithmetic."""

from .arithmetic import combine_arrays, lincomb, mean
from .checkpoint import (
    Checkpoint,
    decode_checkpoint,
    encode_checkpoint,
    load,
    load_checkpoint,
    save,
)

__all__ = [
    "Checkpoint",
    "load",
    "load_checkpoint",
    "save",
    "encode_checkpoint",
    "decode_checkpoint",
    "lincomb",
    "mean",
    "combine_arrays",
]
