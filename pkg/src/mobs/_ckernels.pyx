# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled plane kernels; same surface as ``mobs._purekernels``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint32_t, uint64_t

BACKEND = "cython"

cdef enum:
    MAX_N = 5


cdef inline void _row_combos(uint32_t a, int n, uint32_t *combos) nogil:
    cdef uint32_t row_mask = (1u << n) - 1
    cdef uint32_t rows[MAX_N]
    cdef int t
    cdef uint32_t sel, acc
    for t in range(n):
        rows[t] = (a >> (t * n)) & row_mask
    for sel in range(1u << n):
        acc = 0
        for t in range(n):
            if (sel >> t) & 1:
                acc |= rows[t]
        combos[sel] = acc


cdef inline uint32_t _mul_with(uint32_t y, int n, const uint32_t *combos) nogil:
    cdef uint32_t row_mask = (1u << n) - 1
    cdef uint32_t out = 0
    cdef int i
    for i in range(n):
        out |= combos[(y >> (i * n)) & row_mask] << (i * n)
    return out


cdef void _check_n(int n) except *:
    if n < 1 or n > MAX_N:
        raise ValueError(f"n={n} outside kernel range 1..{MAX_N}")


def plane_mul(uint32_t a, uint32_t b, int n):
    cdef uint32_t combos[1 << MAX_N]
    _check_n(n)
    _row_combos(b, n, combos)
    return _mul_with(a, n, combos)


def mat_mul_planes(a_planes, b_planes, int n):
    cdef uint32_t combos[1 << MAX_N]
    _check_n(n)
    out = []
    for a, b in zip(a_planes, b_planes):
        _row_combos(<uint32_t>b, n, combos)
        out.append(_mul_with(<uint32_t>a, n, combos))
    return tuple(out)


def count_solutions_planes(b_planes, a_planes, int n):
    """Per plane, count ``y`` with ``y * a == b``; also return products evaluated."""
    cdef uint32_t combos[1 << MAX_N]
    cdef uint32_t size, y, target
    cdef uint64_t count, products = 0
    _check_n(n)
    size = 1u << (n * n)
    counts = []
    for b, a in zip(b_planes, a_planes):
        target = <uint32_t>b
        _row_combos(<uint32_t>a, n, combos)
        count = 0
        with nogil:
            for y in range(size):
                if _mul_with(y, n, combos) == target:
                    count += 1
                products += 1
        counts.append(count)
    return counts, products


def orbit_sizes_planes(a_planes, int n):
    cdef uint32_t combos[1 << MAX_N]
    cdef uint32_t size, y, p
    cdef uint64_t distinct, products = 0
    cdef unsigned char *seen
    _check_n(n)
    size = 1u << (n * n)
    seen = <unsigned char *>malloc(size)
    if seen == NULL:
        raise MemoryError()
    sizes = []
    try:
        for a in a_planes:
            _row_combos(<uint32_t>a, n, combos)
            distinct = 0
            with nogil:
                for y in range(size):
                    seen[y] = 0
                for y in range(size):
                    p = _mul_with(y, n, combos)
                    if not seen[p]:
                        seen[p] = 1
                        distinct += 1
                    products += 1
            sizes.append(distinct)
    finally:
        free(seen)
    return sizes, products


def plane_solutions(uint32_t b, uint32_t a, int n):
    cdef uint32_t combos[1 << MAX_N]
    cdef uint32_t size, y
    _check_n(n)
    size = 1u << (n * n)
    _row_combos(a, n, combos)
    out = []
    for y in range(size):
        if _mul_with(y, n, combos) == b:
            out.append(y)
    return out
