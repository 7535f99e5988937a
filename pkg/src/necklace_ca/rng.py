"""SplitMix64 generator for reproducible initial conditions.

Fixed public design (Steele, Lea & Flood 2014) so other implementations can
regenerate the same fields from a seed:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all arithmetic mod 2**64.  A field value on a ring of M spins is
``(next() % M) - L``, drawn for sites 1..2K in order.
"""
from __future__ import annotations

import numpy as np

MASK = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & MASK

    def next(self):
        self.state = (self.state + GOLDEN_GAMMA) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * MIX1) & MASK
        z = ((z ^ (z >> 27)) * MIX2) & MASK
        return z ^ (z >> 31)

    def below(self, n):
        """Integer in ``[0, n)``; modulo bias is at most n / 2**64."""
        return self.next() % n


def seeded_values(seed, count, M):
    """``count`` values in ``[-L, L]`` from a fresh generator."""
    gen = SplitMix64(seed)
    L = (M - 1) // 2
    return np.array([gen.below(M) - L for _ in range(count)], dtype=np.int64)


def seeded_spins(seed, count):
    gen = SplitMix64(seed)
    return np.array([1 if gen.below(2) else -1 for _ in range(count)], dtype=np.int8)
