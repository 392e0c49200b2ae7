"""Backend selection for the hot loops.

Two implementations exist for every performance-sensitive kernel: a
compiled path (numba) and a plain numpy path.  The active one is chosen
per call site from, in order: an explicit argument, the environment
variable MZKERNEL_BACKEND, and finally whichever is available, with the
compiled path preferred.  Results are identical by construction; only
speed differs.
"""

from __future__ import annotations

import os

ENV_VAR = "MZKERNEL_BACKEND"
BACKENDS = ("numba", "numpy")

_numba_ok = None


def numba_available():
    global _numba_ok
    if _numba_ok is None:
        try:
            import numba  # noqa: F401

            _numba_ok = True
        except ImportError:
            _numba_ok = False
    return _numba_ok


def resolve_backend(name=None):
    """Normalize a backend request to 'numba' or 'numpy'."""
    if name is None:
        name = os.environ.get(ENV_VAR) or None
    if name is None:
        return "numba" if numba_available() else "numpy"
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not numba_available():
        raise RuntimeError("the numba backend was requested but numba is not importable")
    return name
