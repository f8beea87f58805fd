"""Seeded random generators.

All stochastic operations take an explicit integer seed and draw from
numpy's PCG64 bit generator (64-bit state increments, 128-bit state), so
results are bit-reproducible across runs and platforms for a given numpy.
"""

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    if seed is None:
        raise ValueError("An explicit integer seed is required")
    return np.random.Generator(np.random.PCG64(int(seed)))


def child_seed(seed: int, *keys: int) -> int:
    """Derive an independent, deterministic seed from a parent seed and integer keys."""
    ss = np.random.SeedSequence([int(seed), *(int(k) for k in keys)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
