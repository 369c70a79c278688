"""Portable seeded generator (SplitMix64) and random rational distributions.

The recurrence, for a 64-bit state ``s``::

    s = s + 0x9E3779B97F4A7C15            (mod 2**64)
    z = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

Uniforms lie strictly inside (0, 1): ``((out >> 11) + 0.5) / 2**53``.
Any language with 64-bit unsigned integers reproduces the stream exactly.
"""

from __future__ import annotations

from fractions import Fraction

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return ((self.next_u64() >> 11) + 0.5) / 9007199254740992.0

    def randint(self, lo: int, hi: int) -> int:
        """Integer in ``[lo, hi]``; rejection sampling keeps it unbiased."""
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            v = self.next_u64()
            if v < limit:
                return lo + v % span

    def choice_distinct(self, pool: list, k: int) -> list:
        """``k`` distinct items of ``pool`` via a partial Fisher-Yates shuffle."""
        items = list(pool)
        for i in range(k):
            j = self.randint(i, len(items) - 1)
            items[i], items[j] = items[j], items[i]
        return items[:k]


GRID = [Fraction(k, 8) for k in range(65)]


def random_discrete(rng: SplitMix64, max_atoms: int = 8, grid: list[Fraction] = GRID):
    """Random DiscreteDist on ``grid`` with 1..max_atoms atoms and rational masses."""
    from .dist import DiscreteDist

    k = rng.randint(1, max_atoms)
    xs = sorted(rng.choice_distinct(grid, k))
    weights = [rng.randint(1, 16) for _ in range(k)]
    total = sum(weights)
    return DiscreteDist(tuple((x, Fraction(w, total)) for x, w in zip(xs, weights)))


def random_family(rng: SplitMix64, max_members: int = 6, max_atoms: int = 8):
    return [random_discrete(rng, max_atoms) for _ in range(rng.randint(1, max_members))]
