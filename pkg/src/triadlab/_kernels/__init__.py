"""Numerical kernel backend selection.

Imports the compiled extension when it is available and falls back to
the NumPy implementation otherwise.  Set ``TRIADLAB_PURE=1`` in the
environment to force the fallback (used by the backend benchmark and
by parity tests).
"""

import os

from . import _pure

if os.environ.get("TRIADLAB_PURE") == "1":
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _corecy as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "python"

agm_mean = _impl.agm_mean
quarter_period = _impl.quarter_period
jacobi_triple = _impl.jacobi_triple
jacobi_arrays = _impl.jacobi_arrays
triad_rk4_step = _impl.triad_rk4_step

__all__ = [
    "BACKEND",
    "agm_mean",
    "quarter_period",
    "jacobi_triple",
    "jacobi_arrays",
    "triad_rk4_step",
]
