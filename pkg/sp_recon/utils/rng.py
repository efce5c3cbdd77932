# utils/rng.py
"""
Seed discipline shared by every randomized step.

All generators are numpy ``PCG64`` bit generators seeded with a 64-bit integer
(through numpy's ``SeedSequence``). Independent streams are derived from a
master seed with the SplitMix64 finalizer, so frame ``i`` of a run always sees
the same randomness no matter which worker executes it.
"""
import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(value):
    """SplitMix64 output function applied to a 64-bit state."""
    z = value & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(master_seed, index):
    """Seed of the ``index``-th stream under ``master_seed``."""
    return splitmix64(int(master_seed) + (int(index) + 1) * GOLDEN_GAMMA)


def make_rng(seed):
    if seed is None:
        raise ValueError("an explicit seed is required for reproducible runs")
    return np.random.Generator(np.random.PCG64(int(seed) & MASK64))
