"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy fallback
takes over. Setting ``FRACWAVE_PURE_PYTHON=1`` forces the fallback.
``FRACWAVE_THREADS`` caps the number of worker threads used to split large
evaluations (0 or unset means one per available CPU).
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py

_impl = _kernels_py
BACKEND = "python"
if os.environ.get("FRACWAVE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

_PARALLEL_MIN = 4096


def thread_count():
    """Number of worker threads permitted by ``FRACWAVE_THREADS``."""
    raw = os.environ.get("FRACWAVE_THREADS", "").strip()
    try:
        n = int(raw) if raw else 0
    except ValueError:
        n = 0
    if n <= 0:
        try:
            n = len(os.sched_getaffinity(0))
        except AttributeError:
            n = os.cpu_count() or 1
    return max(1, n)


def get_backend(name=None):
    """Return the kernel module for ``name`` ('cython', 'python' or None for active)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")


def series_horner(z, coeffs, backend=None):
    z = np.ascontiguousarray(z, dtype=float)
    out = np.empty_like(z)
    get_backend(backend).series_horner(z, np.ascontiguousarray(coeffs, dtype=float), out)
    return out


def ml_large(x, table, backend=None):
    """Evaluate a contour/asymptotic table at points ``x > 1``."""
    impl = get_backend(backend)
    x = np.ascontiguousarray(x, dtype=float)
    out = np.empty_like(x)
    args = (table.alpha, table.beta, table.a_re, table.a_im, table.b_re, table.b_im,
            table.asym, table.x_asym, table.contour_residue, table.has_poles)
    nthreads = thread_count()
    if nthreads == 1 or x.size < _PARALLEL_MIN:
        impl.ml_large(x, out, *args)
        return out
    bounds = np.linspace(0, x.size, nthreads + 1).astype(int)

    def work(i):
        lo, hi = bounds[i], bounds[i + 1]
        impl.ml_large(x[lo:hi], out[lo:hi], *args)

    with ThreadPoolExecutor(nthreads) as pool:
        list(pool.map(work, range(nthreads)))
    return out


def weighted_history(prim, forcing, backend=None):
    prim = np.ascontiguousarray(prim, dtype=float)
    forcing = np.ascontiguousarray(forcing, dtype=float)
    out = np.empty(prim.shape[1])
    get_backend(backend).weighted_history(prim, forcing, out)
    return out
