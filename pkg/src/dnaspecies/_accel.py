"""Optional numba acceleration.

Set ``DNASPECIES_DISABLE_NUMBA=1`` to run every kernel as plain Python/numpy.
"""

import os

_DISABLED = os.environ.get("DNASPECIES_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba

    USE_NUMBA = True
except ImportError:
    numba = None
    USE_NUMBA = False


def jit(func):
    """njit ``func`` when numba is enabled, otherwise return it unchanged."""
    if USE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func
