"""Seeded random streams.

Every stream is a PCG64 generator keyed by a base seed plus a tuple of
integer indices (trial number, grid position, ...), so parallel or reordered
runs draw identical numbers.
"""

import numpy as np


def stream(seed, *keys):
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(seq))
