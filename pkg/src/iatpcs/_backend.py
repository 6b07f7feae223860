"""Kernel backend selection.

Hot kernels are compiled with numba when it is importable. Setting
``IATPCS_DISABLE_NUMBA=1`` forces the vectorized numpy implementations,
which produce the same results and are used as the reference path.
"""

import os

DISABLE_ENV = "IATPCS_DISABLE_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def numba_disabled_by_env() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


def default_backend() -> str:
    """Return ``"numba"`` or ``"numpy"`` according to availability and env."""
    if HAVE_NUMBA and not numba_disabled_by_env():
        return "numba"
    return "numpy"


def njit(func):
    """``numba.njit(cache=True)`` when numba is present, identity otherwise."""
    if HAVE_NUMBA:
        return numba.njit(cache=True)(func)
    return func
