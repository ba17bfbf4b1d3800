"""Kernel backend selection.

The hot numeric kernels (duplicate coalescing, sorted merges, sparse
multiply) exist twice: a numba ``@njit`` implementation and a pure-numpy
vectorized implementation.  Both produce bit-identical results; the numba
lane is the default when numba imports cleanly.

Selection:

* environment variable ``AARRAY_BACKEND`` = ``auto`` | ``numba`` | ``numpy``
  (read at first use), or
* :func:`set_backend` at runtime, which overrides the environment.

Scalar opcodes shared by both lanes and by the semiring registry:
``OP_ADD``, ``OP_MUL``, ``OP_MAX``, ``OP_MIN`` appear as either operation
of a semiring; ``OP_EQ`` only ever appears as a multiplication (it maps a
value pair to 0/1).
"""

from __future__ import annotations

import logging
import os

from .errors import BackendError

OP_ADD = 0
OP_MUL = 1
OP_MAX = 2
OP_MIN = 3
OP_EQ = 4

#: Entry positions travel through the kernels as one int64
#: ``code = (row_rank << CODE_SHIFT) | col_rank``, which sorts row-major and
#: decodes with shifts instead of integer division.  Row ranks must stay
#: below 2**31 and column ranks below 2**32.
CODE_SHIFT = 32

ENV_VAR = "AARRAY_BACKEND"

_log = logging.getLogger("aarray")

_override: str | None = None
_resolved: str | None = None


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except Exception:
        return False
    return True


def set_backend(name: str | None) -> None:
    """Force a backend (``numba``/``numpy``), or ``None``/``auto`` to re-probe."""
    global _override, _resolved
    if name is not None and name not in ("auto", "numba", "numpy"):
        raise BackendError(f"unknown backend {name!r}")
    _override = None if name in (None, "auto") else name
    _resolved = None


def active_backend() -> str:
    """Resolve and cache the backend in effect: ``'numba'`` or ``'numpy'``."""
    global _resolved
    if _resolved is not None:
        return _resolved
    requested = _override or os.environ.get(ENV_VAR, "auto")
    if requested == "numpy":
        _resolved = "numpy"
    elif requested == "numba":
        if not _numba_available():
            raise BackendError("AARRAY_BACKEND=numba but numba is not importable")
        _resolved = "numba"
    elif requested == "auto":
        if _numba_available():
            _resolved = "numba"
        else:
            _log.info("numba unavailable; falling back to the pure-numpy kernels")
            _resolved = "numpy"
    else:
        raise BackendError(f"unknown backend {requested!r} in ${ENV_VAR}")
    return _resolved


def kernels():
    """The kernel module for the active backend."""
    if active_backend() == "numba":
        from . import kernels_numba

        return kernels_numba
    from . import kernels_numpy

    return kernels_numpy
