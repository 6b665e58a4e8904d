"""Backend selection for the compiled kernels.

Set ``DENSIG_BACKEND=numpy`` to force the pure-numpy path. The default is
``numba`` when it imports, otherwise ``numpy``.
"""
import logging
import os

log = logging.getLogger(__name__)

_requested = os.environ.get("DENSIG_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"DENSIG_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when numba is importable, else identity."""
    if not HAVE_NUMBA:
        return func
    return numba.njit(cache=True)(func)
