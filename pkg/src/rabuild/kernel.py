"""Backend selection for the normal-form kernel.

The compiled extension is used when it was built; otherwise the pure-Python
module is used.  Set ``RABUILD_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernel

BACKEND = "python"
_impl = _pykernel

if not os.environ.get("RABUILD_PURE_PYTHON"):
    try:
        from . import _ckernel as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernel

normal_form = _impl.normal_form
inverse_word = _impl.inverse_word
delta_types = _impl.delta_types
isometry_violation = _impl.isometry_violation
distance_table = _impl.distance_table

__all__ = [
    "BACKEND",
    "normal_form",
    "inverse_word",
    "delta_types",
    "isometry_violation",
    "distance_table",
]
