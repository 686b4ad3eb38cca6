"""Kernel backend selection.

The compiled extension is used when it imported cleanly; set
LFMAX_PURE_PYTHON=1 to force the numpy fallback (used by the benchmark
and by tests that compare the two backends).
"""

import os

from . import _numpy_impl

if os.environ.get("LFMAX_PURE_PYTHON") == "1":
    _impl = _numpy_impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _numpy_impl

BACKEND = _impl.BACKEND
logabs_charpoly_grid = _impl.logabs_charpoly_grid
max_logabs_charpoly_batch = _impl.max_logabs_charpoly_batch
max_logabs_szego_batch = _impl.max_logabs_szego_batch
rs_main_sum = _impl.rs_main_sum
kronecker_many = _impl.kronecker_many

__all__ = [
    "BACKEND",
    "logabs_charpoly_grid",
    "max_logabs_charpoly_batch",
    "max_logabs_szego_batch",
    "rs_main_sum",
    "kronecker_many",
]
