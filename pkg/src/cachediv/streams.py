"""Seeded random streams.

Every stream is a ``numpy.random.Generator`` over PCG64 (64-bit output,
128-bit state), seeded from a ``SeedSequence`` whose spawn key encodes
where the stream is used. Two streams with the same master seed and key
are bit-identical; streams with different keys are statistically
independent. This is what makes trials order-independent: trial ``j`` of
a point never depends on how many trials ran before it.
"""

from __future__ import annotations

import numpy as np

MAX_SEED = 2**64 - 1

# Leading spawn-key tags so trial streams and placement streams never collide.
TRIAL_TAG = 0
PLACEMENT_TAG = 1
ORACLE_TAG = 2
LEMMA_TAG = 3


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def float_key(x: float) -> int:
    """Map a float to a non-negative int via its IEEE-754 bit pattern."""
    return int(np.float64(x).view(np.uint64))


def derive_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Return the PCG64 generator for ``(master_seed, *key)``.

    ``key`` entries must be non-negative integers; use :func:`float_key`
    for real-valued parameters.
    """
    ss = np.random.SeedSequence(check_seed(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))
