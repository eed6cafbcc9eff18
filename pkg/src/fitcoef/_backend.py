"""Backend selection for the hot kernel sums.

The compiled extension (``fitcoef._core``) is used when importable; the
numpy implementation is the fallback.  Set ``FITCOEF_BACKEND`` to
``compiled`` or ``python`` to force one (``compiled`` raises if the
extension is missing); default is ``auto``.
"""

from __future__ import annotations

import os

from . import _core_py

_requested = os.environ.get("FITCOEF_BACKEND", "auto").lower()

if _requested == "python":
    core = _core_py
    BACKEND = "python"
elif _requested in ("auto", "compiled"):
    try:
        from . import _core as core  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "FITCOEF_BACKEND=compiled but the fitcoef._core extension is not built"
            )
        core = _core_py
        BACKEND = "python"
else:
    raise ValueError(f"FITCOEF_BACKEND must be auto, compiled or python, got {_requested!r}")


def backend_name() -> str:
    """Name of the active kernel-sum backend ("compiled" or "python")."""
    return BACKEND
