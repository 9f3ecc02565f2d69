"""Backend selection for the evaluation kernels.

Prefers the compiled extension and falls back to the numpy
implementation when it is unavailable.  Set VARLOC_BACKEND=numpy to
force the fallback, or VARLOC_BACKEND=cython to make a missing
extension an error.  Both backends produce bit-identical results.
"""

from __future__ import annotations

import os

_requested = os.environ.get("VARLOC_BACKEND", "auto").strip().lower() or "auto"

if _requested not in ("auto", "cython", "numpy"):
    raise ValueError(
        f"VARLOC_BACKEND must be auto, cython, or numpy; got {_requested!r}"
    )

if _requested == "numpy":
    from . import _kernels_py as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _kernels_py as _impl

        BACKEND = "numpy"

objective_batch = _impl.objective_batch
objective_argmin = _impl.objective_argmin
lattice_argmin = _impl.lattice_argmin
