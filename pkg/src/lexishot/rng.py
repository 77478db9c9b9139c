"""Portable seeded randomness for reproducible sampling.

Shot sets must reproduce bit-for-bit across platforms and reimplementations,
so instead of an interpreter-dependent PRNG we use SplitMix64 (Steele, Lea &
Flood 2014), a tiny generator with a fully specified update:

    state = (state + 0x9E3779B97F4A7C15) mod 2**64
    z = state
    z = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
    z = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2**64
    output = z XOR (z >> 31)

Bounded draws use rejection sampling on the top multiple of ``n`` so they are
unbiased. Sampling without replacement sorts the candidates first and then
runs a partial Fisher-Yates shuffle over indices, which makes the result
independent of the caller's input ordering.

Distinct sampling stages derive distinct streams from one user seed by XORing
the seed with the FNV-1a 64-bit hash of a stage label, so e.g. a base sample
and its complement never replay the same draw sequence.
"""

from __future__ import annotations

from typing import Sequence, TypeVar

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


def fnv1a64(data: str) -> int:
    """FNV-1a 64-bit hash of the UTF-8 encoding of ``data``."""
    h = 0xCBF29CE484222325
    for byte in data.encode("utf-8"):
        h ^= byte
        h = (h * 0x100000001B3) & _MASK64
    return h


class SplitMix64:
    """SplitMix64 generator; seed is reduced modulo 2**64."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n) via rejection sampling; unbiased."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, items: list[T]) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def choose_indices(self, n: int, k: int) -> list[int]:
        """The first ``k`` indices of a partial Fisher-Yates shuffle of
        range(n), in draw order."""
        if k > n:
            raise ValueError(f"cannot draw {k} from {n}")
        idx = list(range(n))
        for i in range(k):
            j = i + self.randbelow(n - i)
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k]


def stream(seed: int, label: str) -> SplitMix64:
    """A named sub-stream of ``seed``: SplitMix64(seed XOR fnv1a64(label))."""
    return SplitMix64((seed & _MASK64) ^ fnv1a64(label))


def sample_sorted(candidates: Sequence[T], k: int, rng: SplitMix64) -> list[T]:
    """Draw ``k`` distinct items uniformly, independent of input order.

    Candidates are sorted (ascending) before the index draw; the returned
    items are in draw order. Candidates must be sortable and distinct.
    """
    ordered = sorted(candidates)
    return [ordered[i] for i in rng.choose_indices(len(ordered), k)]
