"""Seedable, portable 64-bit random number generator.

Everything stochastic in the package (map generation, rollout policies,
Monte-Carlo seeding) draws from splitmix64 so that recorded seeds can be
replayed bit-for-bit, including by re-implementations in other languages.
Episode records carry ALGORITHM_ID so logs are self-describing.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

# Weyl increment and finalizer constants from the reference splitmix64.
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

ALGORITHM_ID = "splitmix64"


class SplitMix64:
    """splitmix64 stream. `state` is the complete serializable state."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Float in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randrange(self, n: int) -> int:
        """Integer in [0, n) by multiply-shift; n must be positive."""
        return (self.next_u64() * n) >> 64

    def normal(self) -> float:
        """Standard normal via Box-Muller (one draw per call, two uniforms)."""
        import math

        u1 = self.uniform()
        u2 = self.uniform()
        # uniform() can return 0.0; log(0) is not.
        while u1 <= 0.0:
            u1 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def copy(self) -> "SplitMix64":
        c = SplitMix64.__new__(SplitMix64)
        c.state = self.state
        return c


def mix(seed: int, salt: int) -> int:
    """Stateless one-shot mix of (seed, salt) into a 64-bit value.

    Used to derive independent substreams (per-rollout seeds, per-cell
    hashes) from one base seed without sharing generator state.
    """
    z = (seed + (salt + 1) * _GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)
