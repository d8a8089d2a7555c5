"""Eigensolver kernel selection.

Two interchangeable implementations of the cyclic Jacobi sweep for
complex Hermitian matrices live here: a Cython extension
(``_jacobi_cy``) and a pure-Python twin (``_jacobi_py``) with the same
arithmetic in the same order, so results agree bit for bit.  The
compiled kernel is preferred when it imported cleanly; set the
environment variable ``QREBOUND_PURE_PYTHON=1`` before import to force
the fallback.  ``set_backend`` exists for benchmarks and tests; it is
not meant to be toggled while other threads are computing.
"""
import os

from . import _jacobi_py

try:
    from . import _jacobi_cy
except ImportError:
    _jacobi_cy = None

_BACKENDS = {"python": _jacobi_py}
if _jacobi_cy is not None:
    _BACKENDS["compiled"] = _jacobi_cy

if _jacobi_cy is not None and not os.environ.get("QREBOUND_PURE_PYTHON"):
    _active_name = "compiled"
else:
    _active_name = "python"


def available_backends():
    return sorted(_BACKENDS)


def active_backend() -> str:
    return _active_name


def set_backend(name: str) -> None:
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active_name = name


def jacobi_sweep(ar, ai, vr, vi, tol, max_sweeps) -> int:
    """Run cyclic Jacobi sweeps in place; return sweep count or -1."""
    return _BACKENDS[_active_name].sweep(ar, ai, vr, vi, tol, max_sweeps)
