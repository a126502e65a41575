"""Backend selection for the floating-point reduction walks.

The compiled extension is used when it imports; ``SO3ZI_PURE=1`` forces the
pure-Python twin.  ``BACKEND`` names whichever is active.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SO3ZI_PURE") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

mobius = _impl.mobius
walk_picard = _impl.walk_picard
walk_gamma = _impl.walk_gamma
walk_gamma_int = _impl.walk_gamma_int
walk_gamma_batch = _impl.walk_gamma_batch
GINV = _impl.GINV
GINV_R = _impl.GINV_R
