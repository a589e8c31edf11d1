"""Integer partitions, partition pairs and the counting weights attached to them."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod


@dataclass(frozen=True, order=False)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a partition has at least one part")
        if any(not isinstance(x, int) or x < 1 for x in parts):
            raise ValueError(f"parts must be positive integers: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    r = length

    def multiplicities(self) -> dict[int, int]:
        """``{j: s_j}`` where s_j counts parts equal to j."""
        return dict(Counter(self.parts))

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        return "(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class PartitionPair:
    first: Partition
    second: Partition

    @property
    def p(self) -> int:
        return self.first.total

    @property
    def q(self) -> int:
        return self.second.total

    @property
    def r1(self) -> int:
        return self.first.length

    @property
    def r2(self) -> int:
        return self.second.length

    @property
    def weight(self) -> int:
        return multinomial_m(self.first) * multinomial_m(self.second)

    def __str__(self):
        return f"({self.first},{self.second})"


@lru_cache(maxsize=None)
def _partitions(p: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if p == 0:
        return ((),)
    out = []
    for first in range(min(p, largest), 0, -1):
        for rest in _partitions(p - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(p: int, max_length: int | None = None) -> list[Partition]:
    """All partitions of ``p`` in descending lexicographic order.

    >>> [str(x) for x in enumerate_partitions(3)]
    ['(3)', '(2,1)', '(1,1,1)']
    """
    if not isinstance(p, int) or p <= 0:
        raise ValueError(f"p must be a positive integer, got {p!r}")
    parts = _partitions(p, p)
    if max_length is not None:
        parts = [x for x in parts if len(x) <= max_length]
    return [Partition(x) for x in parts]


def multinomial_m(lam: Partition) -> int:
    """Number of ways to split a ``lam.total``-element set into unordered blocks of sizes ``lam``."""
    denom = prod(factorial(s) for s in lam.multiplicities().values())
    denom *= prod(factorial(x) for x in lam.parts)
    return factorial(lam.total) // denom


def enumerate_pairs(p: int, q: int, cap1: int | None = None, cap2: int | None = None) -> list[PartitionPair]:
    """Pairs (lambda, lambda') with lambda varying fastest.

    For (p, q) = (3, 2) and cap1 = 2 this gives ((3),(2)), ((2,1),(2)),
    ((3),(1,1)), ((2,1),(1,1)).
    """
    firsts = enumerate_partitions(p, cap1)
    seconds = enumerate_partitions(q, cap2)
    return [PartitionPair(a, b) for b, a in itertools.product(seconds, firsts)]


def falling_product(d: int, r: int) -> int:
    """d (d-1) ... (d-r+1), exactly r factors."""
    if r < 1:
        raise ValueError("r must be at least 1")
    return prod(d - k for k in range(r))
