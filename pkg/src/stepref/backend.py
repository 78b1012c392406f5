"""Kernel backend selection.

Hot numeric kernels exist twice: a pure-numpy reference path and a numba
@njit path. `STEPREF_KERNELS=numpy|numba` picks one at import time; the
default is numba when it is importable. Results are deterministic per
backend, but the two backends may differ in the last bits (different
summation order), so byte-identity guarantees hold per fixed backend.
"""

from __future__ import annotations

import os

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

_VALID = ("numpy", "numba")


def _resolve(name: str | None) -> str:
    if name is None or name == "":
        return "numba" if HAS_NUMBA else "numpy"
    if name not in _VALID:
        raise ValueError(f"STEPREF_KERNELS must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("STEPREF_KERNELS=numba but numba is not importable")
    return name


KERNEL_BACKEND = _resolve(os.environ.get("STEPREF_KERNELS"))


def backend_name() -> str:
    return KERNEL_BACKEND
