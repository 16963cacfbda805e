"""Counting solutions of ``b = Y a`` and left-ideal sizes, plane by plane.

Every count runs the shared enumeration over all ``2^(n^2)`` single-bit
matrices once per plane, then multiplies the per-plane figures into an exact
integer.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

from . import kernels
from .automorphism import CycleAutomorphism
from .boolmat import BitMatrix, DimensionError, _check_n, mat_mul


class ProductCounter:
    """Running total of plane products evaluated by the counting kernels."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = 0

    def add(self, count: int) -> None:
        with self._lock:
            self._value += count

    @property
    def value(self) -> int:
        return self._value

    def reset(self) -> None:
        with self._lock:
            self._value = 0


plane_products = ProductCounter()


def _log2_of(per_plane) -> float:
    if any(c == 0 for c in per_plane):
        return -math.inf
    return math.fsum(math.log2(c) for c in per_plane)


@dataclass(frozen=True)
class SolutionReport:
    per_plane: tuple[int, ...]
    total: int
    log2_total: float

    @classmethod
    def from_counts(cls, per_plane) -> "SolutionReport":
        per_plane = tuple(int(c) for c in per_plane)
        total = 0 if 0 in per_plane else math.prod(per_plane)
        return cls(per_plane, total, _log2_of(per_plane))

    def to_json(self) -> dict:
        return {
            "per_plane": list(self.per_plane),
            "total": str(self.total),
            "log2_total": self.log2_total if math.isfinite(self.log2_total) else "-inf",
        }


class OrbitReport(SolutionReport):
    pass


def _check_pair(b: BitMatrix, a: BitMatrix) -> None:
    if a.n != b.n or a.k != b.k:
        raise DimensionError(f"shape mismatch: ({b.n},{b.k}) vs ({a.n},{a.k})")


def count_singlebit_solutions(b: int, a: int, n: int) -> int:
    """``|{Y : b = Y a}|`` over all single-bit n x n matrices ``Y``."""
    _check_n(n)
    counts, products = kernels.count_solutions_planes((b,), (a,), n)
    plane_products.add(products)
    return counts[0]


def count_solutions(b: BitMatrix, a: BitMatrix) -> SolutionReport:
    _check_pair(b, a)
    counts, products = kernels.count_solutions_planes(b.planes, a.planes, a.n)
    plane_products.add(products)
    return SolutionReport.from_counts(counts)


def count_singlebit_orbit(a: int, n: int) -> int:
    """Number of distinct products ``Y a``."""
    _check_n(n)
    sizes, products = kernels.orbit_sizes_planes((a,), n)
    plane_products.add(products)
    return sizes[0]


def count_orbit(a: BitMatrix) -> OrbitReport:
    """Size of the principal left ideal ``{Y a : Y in S}``."""
    sizes, products = kernels.orbit_sizes_planes(a.planes, a.n)
    plane_products.add(products)
    return OrbitReport.from_counts(sizes)


def plane_solution_sets(b: BitMatrix, a: BitMatrix) -> list[list[int]]:
    """For each plane, every ``Y`` code with ``b_i = Y a_i``."""
    _check_pair(b, a)
    out = []
    for bi, ai in zip(b.planes, a.planes):
        out.append(kernels.plane_solutions(bi, ai, a.n))
    plane_products.add(a.k << (a.n * a.n))
    return out


def telescope_rhs(M: BitMatrix, h: CycleAutomorphism, A: BitMatrix) -> BitMatrix:
    """``h(A) M``, the known side of ``h(A) M = Y A``."""
    return mat_mul(h.apply(A), M)


@dataclass(frozen=True)
class Regularity:
    regular: bool
    forward: SolutionReport  # Y with h(A) M = Y A
    backward: SolutionReport  # Y with Y h(A) M = A


def is_regular(M: BitMatrix, h: CycleAutomorphism, A: BitMatrix) -> Regularity:
    C = telescope_rhs(M, h, A)
    forward = count_solutions(C, A)
    backward = count_solutions(A, C)
    return Regularity(forward.total == backward.total, forward, backward)
