"""Seedable, splittable randomness.

Every stream is a ``random.Random`` seeded from a numpy ``SeedSequence``, so a
single integer seed fixes all chains and independent chains get independent
child sequences.
"""
from __future__ import annotations

import random

import numpy as np

UNIFORM_BITS = 128


def make_rng(seed: int | None = None) -> random.Random:
    ss = np.random.SeedSequence(seed)
    return random.Random(int.from_bytes(ss.generate_state(4, dtype=np.uint64).tobytes(), "little"))


def split_seeds(seed: int | None, n: int) -> list[int]:
    """``n`` child seeds for independent streams."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int.from_bytes(c.generate_state(4, dtype=np.uint64).tobytes(), "little") for c in children]


def split(seed: int | None, n: int) -> list[random.Random]:
    return [random.Random(s) for s in split_seeds(seed, n)]


def uniform_bits(rng: random.Random) -> int:
    """A uniform integer in ``[0, 2**UNIFORM_BITS)``."""
    return rng.getrandbits(UNIFORM_BITS)
