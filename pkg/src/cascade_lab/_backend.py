"""Select the integration kernel at import time.

The compiled extension is used when it was built; otherwise, or when
``CASCADE_LAB_PURE_PYTHON`` is set to a true value, the NumPy fallback is
used.  Both expose ``rk4_cascade`` with identical arguments.
"""
import os

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_FORCE_PURE = os.environ.get("CASCADE_LAB_PURE_PYTHON", "").lower() in ("1", "true", "yes", "on")

KERNELS = {"python": _fallback.rk4_cascade}
if _compiled is not None:
    KERNELS["compiled"] = _compiled.rk4_cascade

BACKEND = "compiled" if (_compiled is not None and not _FORCE_PURE) else "python"


def get_kernel(name=None):
    return KERNELS[name or BACKEND]


def available():
    return sorted(KERNELS)
