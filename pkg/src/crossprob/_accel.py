"""Switch between numba-compiled kernels and the plain numpy fallback.

Set ``CROSSPROB_NO_JIT=1`` to force the fallback even when numba is
installed.  The flag is read once at import time.
"""
import os

_FLAG = "CROSSPROB_NO_JIT"


def _env_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    if _env_disabled():
        raise ImportError("disabled by " + _FLAG)
    from numba import njit, prange  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    prange = range

    def njit(*args, **kwargs):
        # bare @njit and @njit(...) both become no-ops
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
