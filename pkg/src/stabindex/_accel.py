"""Kernel acceleration switch.

Hot kernels are compiled with numba's ``@njit`` unless the environment
variable ``STABINDEX_NO_NUMBA`` is set (to anything other than ``0``,
``false`` or ``no``) or numba is not importable, in which case the same
functions run as plain Python over numpy arrays.  Both paths execute the
identical source, so results agree; only throughput differs (see
``benchmarks/bench_kernels.py``).
"""

import os


def _flag_disabled() -> bool:
    value = os.environ.get("STABINDEX_NO_NUMBA", "").strip().lower()
    return value not in ("", "0", "false", "no")


NUMBA_ENABLED = not _flag_disabled()

if NUMBA_ENABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

ACCEL_MODE = "numba" if NUMBA_ENABLED else "numpy"


def jit_kernel(**kwargs):
    """Decorator for hot kernels: ``njit`` when enabled, identity otherwise."""
    if NUMBA_ENABLED:
        kwargs.setdefault("cache", True)
        return _njit(**kwargs)

    def _identity(fn):
        return fn

    return _identity
