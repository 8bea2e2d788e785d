"""Kernel backend selection.

Imports the compiled Cython core when it is built, otherwise the pure
Python fallback. Set ``SONOTERRAIN_NO_EXT=1`` to force the fallback
(used by the parity tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("SONOTERRAIN_NO_EXT") == "1":
    from . import fallback as kernels
else:
    try:
        from . import _core as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import fallback as kernels

BACKEND = "compiled" if kernels.COMPILED else "fallback"

__all__ = ["kernels", "BACKEND"]
