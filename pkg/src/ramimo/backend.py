"""Hot-kernel backend selection.

The environment variable ``RAMIMO_BACKEND`` picks the implementation once at
import time:

* ``auto`` (default) — numba-compiled kernels when numba imports, else numpy;
* ``numba`` — require the compiled kernels, raise if numba is missing;
* ``numpy`` — force the pure-numpy fallback.

Both implementations are numerically interchangeable; the choice only
affects speed.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

ENV_VAR = "RAMIMO_BACKEND"
_CHOICES = ("auto", "numba", "numpy")


def _load():
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice not in _CHOICES:
        raise ValueError(f"{ENV_VAR} must be one of {_CHOICES}, got {choice!r}")
    if choice == "numpy":
        return _kernels_numpy, "numpy"
    try:
        from . import _kernels_numba
    except ImportError:
        if choice == "numba":
            raise
        return _kernels_numpy, "numpy"
    return _kernels_numba, "numba"


_impl, _name = _load()

capacity_batch = _impl.capacity_batch
search_scan = _impl.search_scan


def active_backend() -> str:
    """Name of the kernel implementation in use: 'numba' or 'numpy'."""
    return _name
