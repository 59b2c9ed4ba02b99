"""Kernel backend selection.

Imports the compiled extension when it is built, otherwise the pure-Python
twin.  Set ``SQK3_PURE_PYTHON=1`` to force the fallback (useful for the
benchmark and for debugging kernel discrepancies).
"""

import os

if os.environ.get("SQK3_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND

metric = _impl.metric
frame = _impl.frame
christoffels = _impl.christoffels
lorentz_rhs = _impl.lorentz_rhs
integrate_lorentz = _impl.integrate_lorentz
