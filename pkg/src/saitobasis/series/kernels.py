"""Kernel selection.

The compiled module is used when it was built and importable; setting
``SAITOBASIS_PURE_PYTHON=1`` forces the pure Python fallback.
"""

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("SAITOBASIS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

dense_mul = _impl.dense_mul
sparse_mul = _impl.sparse_mul
sparse_axpy = _impl.sparse_axpy

__all__ = ["BACKEND", "dense_mul", "sparse_mul", "sparse_axpy"]
