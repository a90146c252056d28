"""Switch between numba-compiled kernels and the pure-numpy fallback.

Set ``SHAREDRAND_DISABLE_NUMBA=1`` before import to force the numpy path.
The flag is read once; kernels are bound at import time.
"""
import os

_truthy = {"1", "true", "yes", "on"}

DISABLED_BY_ENV = os.environ.get("SHAREDRAND_DISABLE_NUMBA", "").strip().lower() in _truthy

try:
    import numba
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity decorator otherwise."""
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        return njit()(args[0])

    def wrap(fn):
        if USE_NUMBA:
            return numba.njit(*args, **kwargs)(fn)
        return fn

    return wrap


def always_njit(**kwargs):
    """Compile with numba whenever it is installed, regardless of the flag.

    Used for the loop-form kernel variants so the benchmark can time both
    paths in one process.
    """
    def wrap(fn):
        if HAVE_NUMBA:
            return numba.njit(**kwargs)(fn)
        return fn

    return wrap


def is_compiled(fn) -> bool:
    if not HAVE_NUMBA:
        return False
    from numba.core.registry import CPUDispatcher
    return isinstance(fn, CPUDispatcher)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
