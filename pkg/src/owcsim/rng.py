"""Deterministic 64-bit PRNG and seed derivation.

The generator and mixer below are part of the tool's external contract: an
independent implementation in any language reproduces identical user drops
from the same base seed. Both are the SplitMix64 construction (Steele,
Lea & Flood's splittable-generator finalizer), fully specified here:

    state   advances by the golden-ratio increment 0x9E3779B97F4A7C15
    output  z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
            z ^= z >> 27; z *= 0x94D049BB133111EB;
            z ^= z >> 31
    double  top 53 bits of the output, scaled by 2^-53

All arithmetic is modulo 2^64.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB


def _finalize(z: int) -> int:
    z ^= z >> 30
    z = (z * MIX_A) & MASK64
    z ^= z >> 27
    z = (z * MIX_B) & MASK64
    z ^= z >> 31
    return z


def mix64(*words: int) -> int:
    """Hash a word sequence to one 64-bit value, order-sensitively.

    Each word is absorbed as finalize((acc ^ word) + GOLDEN); used to derive
    independent child seeds from (base seed, counter) tuples.
    """
    acc = 0
    for w in words:
        acc = _finalize(((acc ^ (w & MASK64)) + GOLDEN) & MASK64)
    return acc


class SplitMix64:
    """Minimal sequential SplitMix64 stream."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK64
        return _finalize(self.state)

    def next_double(self) -> float:
        """Uniform in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * 2.0**-53

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()


def drop_seed(base_seed: int, drop_index: int) -> int:
    """Seed of one Monte Carlo drop's user-placement stream.

    Depends only on (base_seed, drop_index): the user count is deliberately
    NOT mixed in, so the n-user cell of drop d places the same users as the
    first n of the (n+k)-user cell (prefix-stable common random numbers
    across sweep cells), and the system is not mixed in either, so VCSEL
    and LED always see identical geometry.
    """
    return mix64(base_seed, drop_index)
