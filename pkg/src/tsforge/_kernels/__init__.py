"""Kernel backend selection.

Imports the compiled extension when present, otherwise the pure-numpy
fallback.  Set ``TSFORGE_PURE_PYTHON=1`` to force the fallback even when the
extension is installed (useful for benchmarking and debugging).  Both backends
return bit-identical results.
"""

from __future__ import annotations

import os

if os.environ.get("TSFORGE_PURE_PYTHON", "").strip() in {"1", "true", "yes"}:
    from . import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _fallback as _impl

        BACKEND = "python"

sampen_pair_counts = _impl.sampen_pair_counts
ordinal_codes = _impl.ordinal_codes
iir_apply = _impl.iir_apply
atrous_convolve = _impl.atrous_convolve

__all__ = [
    "BACKEND",
    "sampen_pair_counts",
    "ordinal_codes",
    "iir_apply",
    "atrous_convolve",
]
