"""Pure-Python plane kernels.

Mirror of the compiled ``_ckernels`` module; selected by :mod:`mobs.kernels`
when the extension is unavailable or ``MOBS_PURE_PYTHON`` is set.

A plane is an ``n*n``-bit integer, row-major, bit 0 = entry (0, 0).
"""

from __future__ import annotations

import threading
from itertools import product as _cartesian

BACKEND = "python"

_table_lock = threading.Lock()
_tables: dict[int, tuple[tuple[int, ...], ...]] = {}

# Product tables are only worth it where 2^(n^2) x 2^(n^2) stays small.
_TABLE_MAX_N = 3


def plane_mul(a: int, b: int, n: int) -> int:
    row_mask = (1 << n) - 1
    b_rows = [(b >> (t * n)) & row_mask for t in range(n)]
    out = 0
    for i in range(n):
        sel = (a >> (i * n)) & row_mask
        acc = 0
        t = 0
        while sel:
            if sel & 1:
                acc |= b_rows[t]
            sel >>= 1
            t += 1
        out |= acc << (i * n)
    return out


def _right_products(a: int, n: int) -> list[int]:
    """All products ``y * a`` for ``y`` in ascending code order."""
    row_mask = (1 << n) - 1
    a_rows = [(a >> (t * n)) & row_mask for t in range(n)]
    # Row i of y*a depends only on row i of y.
    combos = []
    for sel in range(1 << n):
        acc = 0
        for t in range(n):
            if (sel >> t) & 1:
                acc |= a_rows[t]
        combos.append(acc)
    shifted = [[c << (i * n) for c in combos] for i in range(n)]
    # Row 0 is the least significant block of y, so it must vary fastest.
    out = []
    for rows in _cartesian(*reversed(shifted)):
        out.append(sum(rows))
    return out


def product_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Column-major table: ``table[a][y] == plane_mul(y, a, n)``.

    Built once per ``n`` under a lock; only offered for ``n <= 3``.
    """
    if n > _TABLE_MAX_N:
        raise ValueError(f"product table not offered for n={n}")
    table = _tables.get(n)
    if table is not None:
        return table
    with _table_lock:
        table = _tables.get(n)
        if table is None:
            table = tuple(tuple(_right_products(a, n)) for a in range(1 << (n * n)))
            _tables[n] = table
    return table


def _column(a: int, n: int):
    if n <= _TABLE_MAX_N:
        return product_table(n)[a]
    return _right_products(a, n)


def mat_mul_planes(a_planes, b_planes, n: int) -> tuple[int, ...]:
    if n <= _TABLE_MAX_N:
        table = product_table(n)
        return tuple(table[b][a] for a, b in zip(a_planes, b_planes))
    return tuple(plane_mul(a, b, n) for a, b in zip(a_planes, b_planes))


def count_solutions_planes(b_planes, a_planes, n: int) -> tuple[list[int], int]:
    """Per plane, count ``y`` with ``y * a == b``; also return products evaluated."""
    counts = []
    products = 0
    for b, a in zip(b_planes, a_planes):
        col = _column(a, n)
        counts.append(col.count(b))
        products += len(col)
    return counts, products


def orbit_sizes_planes(a_planes, n: int) -> tuple[list[int], int]:
    sizes = []
    products = 0
    for a in a_planes:
        col = _column(a, n)
        sizes.append(len(set(col)))
        products += len(col)
    return sizes, products


def plane_solutions(b: int, a: int, n: int) -> list[int]:
    col = _column(a, n)
    return [y for y, p in enumerate(col) if p == b]
