"""Select between numba-compiled kernels and the pure-numpy fallback.

Set ``LAPINF_DISABLE_NUMBA=1`` to force the numpy path (useful for debugging
and for checking the two paths against each other).  ``LAPINF_NUM_THREADS``
caps the numba thread pool.
"""

import os

__all__ = ["USE_NUMBA", "njit", "prange", "set_num_threads"]


def _flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = not _flag("LAPINF_DISABLE_NUMBA")

if USE_NUMBA:
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if USE_NUMBA:
    # skip the TBB probe (and its version warning) unless the user picked a layer
    if "NUMBA_THREADING_LAYER" not in os.environ:
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    njit = numba.njit
    prange = numba.prange

    def set_num_threads(n):
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))

    _threads = os.environ.get("LAPINF_NUM_THREADS")
    if _threads:
        set_num_threads(_threads)
else:
    prange = range

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn

    def set_num_threads(n):
        pass
