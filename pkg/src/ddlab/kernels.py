"""Backend selection for the hot counting kernel.

Prefers the compiled extension and falls back to the pure-numpy implementation
when it is unavailable. Setting the environment variable DDLAB_PURE to a
non-empty value other than "0" forces the fallback (useful for benchmarking and
for cross-checking the two routes).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("DDLAB_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def all_subset_costs(table, n):
    """Distinct-row count of the (masked bits) x (other bits) matrix, per mask."""
    return _impl.all_subset_costs(table, n)
