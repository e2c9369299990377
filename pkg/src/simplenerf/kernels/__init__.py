"""Hot numeric kernels with a numba-jitted fast path.

The backend is chosen once at import time: numba when it is importable,
unless the environment variable ``SIMPLENERF_NUMBA`` is set to ``0``,
``false``, ``no`` or ``off``, in which case the pure-numpy fallback is
used. ``ACTIVE_BACKEND`` reports the choice; both paths are exercised by
the test suite and compared by ``benchmarks/bench_kernels.py``.
"""

import os

_flag = os.environ.get("SIMPLENERF_NUMBA", "").strip().lower()
_want_numba = _flag not in ("0", "false", "no", "off")

if _want_numba:
    try:
        from . import _numba as _impl
        ACTIVE_BACKEND = "numba"
    except ImportError:
        from . import _numpy as _impl
        ACTIVE_BACKEND = "numpy"
else:
    from . import _numpy as _impl
    ACTIVE_BACKEND = "numpy"

weights_forward = _impl.weights_forward
weights_backward = _impl.weights_backward
sample_pdf_uniform_bins = _impl.sample_pdf_uniform_bins
bilinear_rgb = _impl.bilinear_rgb
patch_mse = _impl.patch_mse
splat_depth = _impl.splat_depth

__all__ = [
    "ACTIVE_BACKEND",
    "weights_forward",
    "weights_backward",
    "sample_pdf_uniform_bins",
    "bilinear_rgb",
    "patch_mse",
    "splat_depth",
]
