"""JIT switch for the hot kernels.

Kernels are written once in a numba-compatible subset of Python.  When numba
is importable and ``SKEWLAB_NO_JIT`` is unset (or ``0``), they are compiled
with ``@njit``; otherwise the very same functions run as plain Python over
numpy arrays.
"""

from __future__ import annotations

import os

_flag = os.environ.get("SKEWLAB_NO_JIT", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("JIT disabled by SKEWLAB_NO_JIT")
    from numba import njit as _njit

    JIT_ENABLED = True
except ImportError:
    _njit = None
    JIT_ENABLED = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if JIT_ENABLED:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def worker_count() -> int:
    """Worker cap from ``SKEWLAB_THREADS`` (defaults to the CPU count)."""
    n = os.cpu_count() or 1
    cap = os.environ.get("SKEWLAB_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n
