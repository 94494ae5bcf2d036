"""Kernel backend selection.

The compiled extension is preferred when importable; the NumPy implementation
is a drop-in replacement.  Set STURMSPEC_FORCE_PYTHON=1 to pin the fallback
(used by the benchmark and the cross-backend equivalence tests).
"""

from __future__ import annotations

import os

from . import _magnus_py

if os.environ.get("STURMSPEC_FORCE_PYTHON"):
    _impl = _magnus_py
    BACKEND = "python"
else:
    try:
        from . import _magnus_c as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _magnus_py
        BACKEND = "python"

propagate_end = _impl.propagate_end
propagate_trace = _impl.propagate_trace


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'python'."""
    return BACKEND
