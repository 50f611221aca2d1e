"""Kernel selection: the compiled extension when importable, else pure Python.

Set CCPROOF_PURE_PYTHON=1 to force the fallback.
"""

import os
from array import array

from . import _pykernels

UNUSABLE = _pykernels.UNUSABLE
# keeps int64 sums in the compiled kernel far from overflow
MAX_COMPILED_WEIGHT = 1 << 40

if os.environ.get("CCPROOF_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def make_searcher(indptr, adj_v, adj_e, backend=None):
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        return _compiled.Searcher(indptr, adj_v, adj_e)
    return _pykernels.Searcher(indptr, adj_v, adj_e)


def as_weights(values):
    """Pack per-edge weights (None = unusable) into an int64 array."""
    return array("q", (UNUSABLE if w is None else w for w in values))


def fits_compiled(weights):
    return max(weights, default=0) < MAX_COMPILED_WEIGHT
