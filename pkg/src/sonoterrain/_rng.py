"""Integer-hash utilities backing every deterministic draw in the package.

Everything here is 64-bit integer arithmetic, so results are identical
across platforms and across the compiled/fallback kernel backends.
"""

from __future__ import annotations

import math

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
ROW_SALT = 0xD1B54A32D192ED03


def mix64(z: int) -> int:
    """Splitmix64 finalizer: avalanche a 64-bit value."""
    z &= MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & MASK64
    z ^= z >> 31
    return z


def cell_hashes(seed: int, i: int, j: int) -> tuple[int, int]:
    """Two decorrelated 64-bit hashes for grid cell (i, j)."""
    base = (seed + i * GOLDEN + j * ROW_SALT) & MASK64
    h1 = mix64(base)
    h2 = mix64(h1)
    return h1, h2


class SplitMix64:
    """Tiny seedable RNG with a stable, platform-independent stream."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * (1.0 / 9007199254740992.0)

    def uniform_in(self, lo: float, hi: float) -> float:
        u = self.uniform()
        return lo * (1.0 - u) + hi * u

    def exponential(self) -> float:
        """Unit-rate exponential deviate."""
        return -math.log(1.0 - self.uniform())
