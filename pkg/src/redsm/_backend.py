"""Pick the compiled kernels when they are built, else the numpy fallback.

Set ``REDSM_BACKEND=python`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("REDSM_BACKEND", "").lower() == "python":
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        kernels = _pykernels
        BACKEND = "python"

bisect_counts = kernels.bisect_counts
jacobi_eigh = kernels.jacobi_eigh

__all__ = ["BACKEND", "bisect_counts", "jacobi_eigh"]
