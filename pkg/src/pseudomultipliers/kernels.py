"""Scan kernels for the local search, compiled when available.

``BACKEND`` is ``"cython"`` when the extension imported and ``"numpy"``
otherwise.  Set ``PSEUDOMULT_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("PSEUDOMULT_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "numpy" if _impl is _kernels_py else "cython"
pair_gap_scan = _impl.pair_gap_scan
line_gap_scan = _impl.line_gap_scan
