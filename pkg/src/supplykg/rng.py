"""Deterministic 64-bit PRNG (splitmix64).

Stdlib ``random`` is avoided on purpose: generated networks must be
byte-identical for a given seed across platforms and Python versions, so the
whole algorithm is pinned here. Splitmix64 passes BigCrush, needs only a
64-bit state, and is trivially portable.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK = (1 << 64) - 1

T = TypeVar("T")


class SplitMix64:
    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive. Always consumes at least
        one draw, even for degenerate ranges, so pinning a configuration
        range to a single value never shifts the draw stream."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        # rejection sampling keeps the distribution exactly uniform
        limit = (1 << 64) - ((1 << 64) % span)
        x = self.next_u64()
        while x >= limit:
            x = self.next_u64()
        return lo + (x % span)

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise ValueError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]
