"""Bit-position permutations acting entrywise on bitstring matrices.

Convention: the bit at position ``i`` moves to position ``sigma(i)``, so plane
``j`` of ``h(M)`` is plane ``sigma^-1(j)`` of ``M``. For a cycle
``(c0, c1, ..., c_{p-1})``, ``sigma(c_t) = c_{t+1 mod p}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .boolmat import BitMatrix, DimensionError


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def primes_for_k(k: int) -> list[int]:
    """The ascending prefix of the primes summing exactly to ``k``.

    >>> primes_for_k(10)
    [2, 3, 5]
    """
    total = 0
    primes: list[int] = []
    candidate = 2
    while total < k:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
            total += candidate
        candidate += 1
    if total != k:
        raise ValueError(f"k={k} is not a sum of the first few primes")
    return primes


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class CycleAutomorphism:
    k: int
    cycles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        seen: set[int] = set()
        cycles = []
        for cyc in self.cycles:
            cyc = tuple(int(c) for c in cyc)
            for pos in cyc:
                if not 0 <= pos < self.k:
                    raise ValueError(f"position {pos} outside 0..{self.k - 1}")
                if pos in seen:
                    raise ValueError(f"position {pos} appears in more than one cycle")
                seen.add(pos)
            if len(cyc) > 1:
                lead = cyc.index(min(cyc))
                cycles.append(cyc[lead:] + cyc[:lead])
        # Canonical form: each cycle starts at its smallest member, cycles
        # ordered by that member.
        object.__setattr__(self, "cycles", tuple(sorted(cycles, key=min)))

    @classmethod
    def identity(cls, k: int) -> "CycleAutomorphism":
        return cls(k, ())

    @classmethod
    def from_mapping(cls, sigma: Sequence[int]) -> "CycleAutomorphism":
        """Decompose a position map into disjoint cycles."""
        k = len(sigma)
        if sorted(sigma) != list(range(k)):
            raise ValueError("not a permutation of 0..k-1")
        done = [False] * k
        cycles = []
        for start in range(k):
            if done[start]:
                continue
            cyc = [start]
            done[start] = True
            nxt = sigma[start]
            while nxt != start:
                cyc.append(nxt)
                done[nxt] = True
                nxt = sigma[nxt]
            cycles.append(tuple(cyc))
        return cls(k, tuple(cycles))

    @property
    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles)) if self.cycles else 1

    @property
    def fixed_points(self) -> list[int]:
        moved = {p for c in self.cycles for p in c}
        return [p for p in range(self.k) if p not in moved]

    def mapping(self) -> tuple[int, ...]:
        """``sigma`` as a length-k tuple."""
        sigma = list(range(self.k))
        for cyc in self.cycles:
            p = len(cyc)
            for t, pos in enumerate(cyc):
                sigma[pos] = cyc[(t + 1) % p]
        return tuple(sigma)

    def power(self, e: int) -> "CycleAutomorphism":
        """``h^e``; each p-cycle becomes a shift by ``e mod p``."""
        if e < 0:
            raise ValueError("exponent must be non-negative")
        return CycleAutomorphism.from_mapping(self.shifts(e))

    def shifts(self, e: int) -> tuple[int, ...]:
        """Position map of ``h^e`` without building cycle objects."""
        sigma = list(range(self.k))
        for cyc in self.cycles:
            p = len(cyc)
            s = e % p
            for t, pos in enumerate(cyc):
                sigma[pos] = cyc[(t + s) % p]
        return tuple(sigma)

    def apply(self, m: BitMatrix, e: int = 1) -> BitMatrix:
        """``h^e(m)``, computed directly from cycle shifts."""
        if m.k != self.k:
            raise DimensionError(f"permutation on {self.k} positions applied to k={m.k}")
        if e < 0:
            raise ValueError("exponent must be non-negative")
        if not self.cycles:
            return m
        sigma = self.shifts(e)
        planes = [0] * self.k
        for i, plane in enumerate(m.planes):
            planes[sigma[i]] = plane
        return BitMatrix(m.n, tuple(planes))

    __call__ = apply

    def to_json(self) -> dict:
        return {"k": self.k, "cycles": [list(c) for c in self.cycles]}

    @classmethod
    def from_json(cls, data: dict) -> "CycleAutomorphism":
        return cls(int(data["k"]), tuple(tuple(c) for c in data["cycles"]))


def build_prime_cycle_perm(primes: Sequence[int], rng=None, k: int | None = None) -> CycleAutomorphism:
    """Product of disjoint cycles of the given distinct prime lengths.

    By default the cycles occupy consecutive position blocks in ascending
    prime order. With ``rng`` (a ``numpy.random.Generator``) the positions are
    shuffled first, scattering each cycle.
    """
    primes = sorted(int(p) for p in primes)
    if len(set(primes)) != len(primes):
        raise ValueError("cycle lengths must be distinct primes")
    for p in primes:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    total = sum(primes)
    if k is not None and k != total:
        raise ValueError(f"primes sum to {total}, not k={k}")
    positions = list(range(total))
    if rng is not None:
        positions = [int(v) for v in rng.permutation(total)]
    cycles = []
    start = 0
    for p in primes:
        cycles.append(tuple(positions[start:start + p]))
        start += p
    return CycleAutomorphism(total, tuple(cycles))
