"""Seeded pseudo-random generator for reproducible law-suite sampling.

xorshift64* with the standard constants: the 64-bit state is updated by
``x ^= x >> 12; x ^= x << 25; x ^= x >> 27`` and the output is
``state * 0x2545F4914F6CDD1D`` truncated to 64 bits.  A zero seed is
replaced by the splitmix64 increment 0x9E3779B97F4A7C15 so the state
never collapses.  ``below(n)`` reduces by modulo; the slight bias is
irrelevant at test sizes and keeps the stream identical across
implementations.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_MULT = 0x2545F4914F6CDD1D
_ZERO_SEED = 0x9E3779B97F4A7C15


class XorShift64Star:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = (seed & _MASK) or _ZERO_SEED

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK
        x ^= x >> 27
        self.state = x
        return (x * _MULT) & _MASK

    def below(self, n: int) -> int:
        """Uniform-ish draw from range(n); n must be positive."""
        return self.next_u64() % n

    def choice(self, seq):
        return seq[self.below(len(seq))]
