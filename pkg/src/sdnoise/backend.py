"""Kernel backend selection.

The hot epoch kernels run numba-jitted by default; setting the
environment variable SDNOISE_BACKEND=numpy forces the pure-numpy path
(SDNOISE_BACKEND=numba forces jit and fails loudly if numba is missing).
The two backends execute identical code (see _kernels_impl).
"""

from __future__ import annotations

import os

from . import _kernels_impl

_ENV_VAR = "SDNOISE_BACKEND"
_jitted = None


def _get_jitted():
    global _jitted
    if _jitted is None:
        import numba

        _jitted = (
            numba.njit(cache=True)(_kernels_impl.linear_epoch),
            numba.njit(cache=True)(_kernels_impl.mlp_epoch),
        )
    return _jitted


def backend_name() -> str:
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice in ("numpy", "numba"):
        return choice
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def get_kernels():
    """Return (linear_epoch, mlp_epoch) for the active backend."""
    if backend_name() == "numba":
        return _get_jitted()
    return _kernels_impl.linear_epoch, _kernels_impl.mlp_epoch
