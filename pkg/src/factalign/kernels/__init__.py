"""Kernel selection: compiled extension when available, pure Python otherwise.

Set FACTALIGN_PURE_KERNELS=1 to force the pure implementation (used by the
kernel benchmark and the equivalence tests). Both implementations return
bit-identical float64 arrays.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("FACTALIGN_PURE_KERNELS") == "1":
    _impl = pure
    IMPLEMENTATION = "pure"
else:
    try:
        from factalign import _native as _impl  # type: ignore[no-redef]

        IMPLEMENTATION = "compiled"
    except ImportError:
        _impl = pure
        IMPLEMENTATION = "pure"

lexical_probs = _impl.lexical_probs

__all__ = ["lexical_probs", "IMPLEMENTATION", "pure"]
