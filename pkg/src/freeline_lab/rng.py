"""Seeded randomness.

Every random stream is a PCG64 generator keyed by (seed, *keys) through
numpy's SeedSequence, so a stream for, say, cell 17 of a census is the same
whether cells are processed serially or by several workers.
"""
import numpy as np


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1),
                                 spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(seq))
