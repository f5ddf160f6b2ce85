"""Backend selection for the integer kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise
the pure-Python ``_kernels`` module is loaded.  Setting
``POLYCONN_PURE_PYTHON=1`` forces the fallback.
"""
import os

from . import _kernels as pure

OPTIMAL = pure.OPTIMAL
UNBOUNDED = pure.UNBOUNDED

compiled = None
if os.environ.get("POLYCONN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "python"

normalize_row = _impl.normalize_row
pivot = _impl.pivot
simplex_iterate = _impl.simplex_iterate
gauss_jordan = _impl.gauss_jordan
integer_rank = _impl.integer_rank
smith_invariants = _impl.smith_invariants
