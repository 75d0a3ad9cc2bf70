"""Deterministic splittable random streams for Monte Carlo replications.

SplitMix64: the output at step c is mix64(key + c * GAMMA), a pure
function of (key, counter), so a stream is fully determined by its key
and any replication schedule gives bit-identical results. Keys are
derived by folding a path of integers into a seed, e.g.
``stream(seed, replication)`` or ``stream(seed, n, replication)``.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijection with strong avalanche."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def fold(key: int, word: int) -> int:
    """Fold one integer into a key; order-sensitive and collision-resistant."""
    return mix64(((key ^ mix64(word & _MASK)) + _GAMMA) & _MASK)


class SplitMix64:
    """Counter-based 64-bit generator over a fixed key."""

    __slots__ = ("_state",)

    def __init__(self, key: int):
        self._state = key & _MASK

    def next64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return mix64(self._state)

    def bit(self) -> int:
        """A fair bit."""
        return self.next64() & 1

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError(f"need a positive bound, got {n}")
        if n == 1:
            return 0
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next64()
            if r < limit:
                return r % n

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next64() >> 11) * (1.0 / (1 << 53))


def stream(seed: int, *path: int) -> SplitMix64:
    """The stream identified by (seed, *path); same arguments, same stream."""
    key = mix64(seed)
    for word in path:
        key = fold(key, word)
    return SplitMix64(key)
