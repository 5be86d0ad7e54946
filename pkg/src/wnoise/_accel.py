"""Backend selection for the hot numeric loops.

Numba is used when it imports cleanly and ``WNOISE_DISABLE_NUMBA`` is unset
(or ``0``). Otherwise every kernel falls back to its numpy/scipy path. Both
paths are kept importable so they can be compared and benchmarked.
"""

import os

_flag = os.environ.get("WNOISE_DISABLE_NUMBA", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by WNOISE_DISABLE_NUMBA")
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False


def njit(func):
    """Compile ``func`` with numba if available, else return it unchanged."""
    if _njit is None:
        return func
    return _njit(cache=True, nogil=True)(func)


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
