"""Backend selection for the plane kernels.

The compiled extension is used when importable; ``MOBS_PURE_PYTHON=1`` forces
the pure-Python fallback. Both expose the same functions.
"""

import os

from . import _purekernels

if os.environ.get("MOBS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _purekernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _purekernels

BACKEND = _impl.BACKEND

plane_mul = _impl.plane_mul
mat_mul_planes = _impl.mat_mul_planes
count_solutions_planes = _impl.count_solutions_planes
orbit_sizes_planes = _impl.orbit_sizes_planes
plane_solutions = _impl.plane_solutions


def available_backends():
    """Map backend name to kernel module for every importable backend."""
    out = {"python": _purekernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
