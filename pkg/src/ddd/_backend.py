"""Kernel backend selection.

The compiled extension is preferred when importable; setting
``DDD_PURE_PYTHON=1`` forces the pure-Python fallback.  Both backends
produce bit-identical results, so the choice only affects speed.
"""

import os

from . import _kernels_py

if os.environ.get("DDD_PURE_PYTHON", "") == "1":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py


def backend_name() -> str:
    return kernels.BACKEND
