"""Self-contained seedable PRNG for reproducible model generation.

xorshift64* with the standard multiplier: from state x, each step computes

    x ^= x >> 12;  x ^= x << 25 (mod 2^64);  x ^= x >> 27
    output = x * 0x2545F4914F6CDD1D (mod 2^64)

The recurrence is fixed here rather than delegated to a library RNG so
that a given seed reproduces the same models in any implementation or
language (full write-up in docs/generator.md).
"""

from __future__ import annotations

_M64 = (1 << 64) - 1
_MULTIPLIER = 0x2545F4914F6CDD1D
# xorshift state must never be zero; seed 0 maps to this documented value.
_ZERO_SEED_STATE = 0x9E3779B97F4A7C15


class XorShift64Star:
    def __init__(self, seed: int):
        if not 0 <= seed <= _M64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.state = seed if seed != 0 else _ZERO_SEED_STATE

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _M64
        x ^= x >> 27
        self.state = x
        return (x * _MULTIPLIER) & _M64

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), bias-free via rejection sampling."""
        if n <= 0:
            raise ValueError(f"below() needs a positive bound, got {n}")
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < threshold:
                return r % n
