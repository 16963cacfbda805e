"""Matrices over the semiring of k-bit strings under OR/AND.

A :class:`BitMatrix` is stored plane-major: ``planes[i]`` is the single-bit
matrix formed by bit ``i`` of every entry, encoded as an ``n*n``-bit integer
(row-major, bit 0 = entry (0, 0)). Since the semiring is a direct product of
``k`` Boolean semirings, multiplication acts independently on each plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import kernels

MAX_ENUM_N = 5


class DimensionError(ValueError):
    """Operands disagree in dimension or bitstring length."""


def _check_n(n: int) -> None:
    if n < 1:
        raise DimensionError(f"matrix dimension must be >= 1, got {n}")
    if n > MAX_ENUM_N:
        raise DimensionError(f"n={n} exceeds the enumeration guard n <= {MAX_ENUM_N}")


# ---------------------------------------------------------------- planes


def plane_mul(a: int, b: int, n: int) -> int:
    """Boolean matrix product of two plane codes."""
    _check_n(n)
    return kernels.plane_mul(a, b, n)


def plane_identity(n: int) -> int:
    return sum(1 << (i * n + i) for i in range(n))


def plane_ones(n: int) -> int:
    return (1 << (n * n)) - 1


def plane_to_grid(code: int, n: int) -> list[list[int]]:
    return [[(code >> (r * n + c)) & 1 for c in range(n)] for r in range(n)]


def grid_to_plane(grid: Sequence[Sequence[int]]) -> int:
    n = len(grid)
    code = 0
    for r, row in enumerate(grid):
        if len(row) != n:
            raise DimensionError("plane grid must be square")
        for c, bit in enumerate(row):
            if bit:
                code |= 1 << (r * n + c)
    return code


def all_matrices(n: int) -> range:
    """Every n x n single-bit matrix, as codes in ascending order.

    Element ``t`` is the plane with code ``t``, so the sequence is simply
    ``range(2**(n*n))``.
    """
    _check_n(n)
    return range(1 << (n * n))


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class BitMatrix:
    n: int
    planes: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        if not self.planes:
            raise DimensionError("bitstring length k must be >= 1")
        limit = 1 << (self.n * self.n)
        for p in self.planes:
            if not 0 <= p < limit:
                raise DimensionError(f"plane code {p} out of range for n={self.n}")

    @property
    def k(self) -> int:
        return len(self.planes)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return mat_mul(self, other)

    @classmethod
    def zeros(cls, n: int, k: int) -> "BitMatrix":
        return cls(n, (0,) * k)

    @classmethod
    def identity(cls, n: int, k: int) -> "BitMatrix":
        return cls(n, (plane_identity(n),) * k)

    @classmethod
    def random(cls, n: int, k: int, rng) -> "BitMatrix":
        """Independent fair bits; ``rng`` is a ``numpy.random.Generator``.

        All-zero draws are kept; they are valid semigroup elements.
        """
        codes = rng.integers(0, 1 << (n * n), size=k, dtype="int64")
        return cls(n, tuple(int(c) for c in codes))

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[int]], k: int) -> "BitMatrix":
        """Build from an n x n grid of k-bit integers (bit i = plane i)."""
        n = len(entries)
        planes = [0] * k
        for r, row in enumerate(entries):
            if len(row) != n:
                raise DimensionError("entry grid must be square")
            for c, value in enumerate(row):
                if value < 0 or value >> k:
                    raise DimensionError(f"entry ({r},{c}) does not fit in {k} bits")
                pos = r * n + c
                for i in range(k):
                    if (value >> i) & 1:
                        planes[i] |= 1 << pos
        return cls(n, tuple(planes))

    def entries(self) -> list[list[int]]:
        """Entry-major view: grid of k-bit integers."""
        n = self.n
        grid = [[0] * n for _ in range(n)]
        for i, plane in enumerate(self.planes):
            p = plane
            pos = 0
            while p:
                if p & 1:
                    grid[pos // n][pos % n] |= 1 << i
                p >>= 1
                pos += 1
        return grid

    def to_json(self) -> dict:
        width = (self.k + 3) // 4
        return {
            "n": self.n,
            "k": self.k,
            "entries": [[format(v, f"0{width}x") for v in row] for row in self.entries()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BitMatrix":
        n, k = int(data["n"]), int(data["k"])
        rows = data["entries"]
        if len(rows) != n:
            raise DimensionError(f"expected {n} rows, got {len(rows)}")
        return cls.from_entries([[int(v, 16) for v in row] for row in rows], k)


def _check_pair(a: BitMatrix, b: BitMatrix) -> None:
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    if a.k != b.k:
        raise DimensionError(f"bitstring length mismatch: {a.k} vs {b.k}")


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    _check_pair(a, b)
    return BitMatrix(a.n, kernels.mat_mul_planes(a.planes, b.planes, a.n))


def pull(i: int, m: BitMatrix) -> int:
    """Plane ``i`` of ``m``: the single-bit matrix of bit ``i`` of each entry."""
    if not 0 <= i < m.k:
        raise IndexError(f"plane index {i} out of range for k={m.k}")
    return m.planes[i]


def assemble(planes: Iterable[int], n: int) -> BitMatrix:
    """Inverse of :func:`pull` over all planes."""
    planes = tuple(planes)
    if not planes:
        raise DimensionError("cannot assemble an empty plane sequence")
    return BitMatrix(n, planes)
