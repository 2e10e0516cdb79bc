"""Seed derivation shared by every randomized component.

All randomness flows from one base seed. Each use site derives its own seed
from the base and a sequence of labels (subcommand name, grid index, candidate
position...), so adding a new consumer never shifts the seeds of existing ones.
"""

import hashlib

import numpy as np


def derive_seed(base_seed: int, *labels: object) -> int:
    """Derive a 32-bit seed from a base seed and labels.

    The seed is the first four bytes (big-endian) of SHA-256 over
    ``"base:label1:label2..."``.

    Args:
        base_seed: The user-facing seed (e.g. ``--seed``)
        *labels: Use-site labels, converted with ``str``

    Returns:
        Integer in [0, 2**32)
    """
    key = ":".join([str(int(base_seed))] + [str(label) for label in labels])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def make_rng(base_seed: int, *labels: object) -> np.random.Generator:
    """Create a numpy Generator seeded via `derive_seed`."""
    return np.random.default_rng(derive_seed(base_seed, *labels))


def subcommand_seed(base_seed: int, subcommand: str, index: int = 0) -> int:
    """Seed of the `index`-th randomized use inside a subcommand.

    Running the experiment and running its subcommands by hand with the same
    ``--seed`` therefore draw the same numbers.
    """
    return derive_seed(base_seed, subcommand, index)
