"""Deterministic 64-bit random streams (splitmix64).

Every stochastic component in the package draws from these streams instead of
``random``/``numpy.random``: the determinism contracts (bit-identical reruns,
scheduling-independent replication seeds, exact agreement between the compiled
and pure-Python kernels) require one generator definition that is trivial to
reimplement in C. The compiled kernels inline the same constants.
"""

from __future__ import annotations

import operator

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_DERIVE_A = 0xD1342543DE82EF95
_DERIVE_C = 0x2545F4914F6CDD1D
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit value."""
    z &= MASK64
    z ^= z >> 30
    z = (z * _MIX1) & MASK64
    z ^= z >> 27
    z = (z * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive(seed: int, *keys: int) -> int:
    """Derive an independent child seed from ``seed`` and integer ``keys``.

    Used to give every replication / ensemble / voting group / experiment cell
    its own stream so results do not depend on execution order.
    """
    s = operator.index(seed) & MASK64
    for k in keys:
        s = mix64((s * _DERIVE_A + (operator.index(k) & MASK64) * GAMMA + _DERIVE_C) & MASK64)
    return s


def key_from_name(name: str) -> int:
    """Stable integer key for a string (unlike the salted builtin hash)."""
    s = mix64(len(name))
    for b in name.encode("utf-8"):
        s = derive(s, b)
    return s


class Stream:
    """A forward-only splitmix64 stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return (self.u64() >> 11) * _INV53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n). Modulo bias is negligible for n << 2^64."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        return self.u64() % n

    def spawn(self, *keys: int) -> "Stream":
        return Stream(derive(self.state, *keys))
