"""Backend selection for the binary-triplet kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
numpy implementation in ``_pykernels`` is used. Setting the environment
variable ``MVINFO_PURE_PYTHON=1`` forces the numpy backend.
"""
from __future__ import annotations

import importlib
import os

import numpy as np

from .pid import CLAMP_TOL, DecompositionError
from .measures import NEG_FLOOR

COLUMNS = (
    "h_y", "mi_x1", "mi_x2", "mi_joint", "ii", "ci", "tc", "dtc",
    "delta_i", "mi_delta_gap", "rsi", "vs",
    "pid_red", "pid_unq1", "pid_unq2", "pid_syn",
)
_NONNEG = ("h_y", "mi_x1", "mi_x2", "mi_joint", "tc", "dtc", "delta_i")
_PID = ("pid_red", "pid_unq1", "pid_unq2", "pid_syn")


def available_backends() -> list[str]:
    names = []
    for name, mod in (("cython", "._ckernels"), ("python", "._pykernels")):
        try:
            importlib.import_module(mod, __package__)
        except ImportError:
            continue
        names.append(name)
    return names


def get_backend(name: str | None = None):
    """Kernel module for ``name`` ("cython" or "python"); the default backend if None."""
    if name is None:
        return _impl
    mod = {"cython": "._ckernels", "python": "._pykernels"}[name]
    return importlib.import_module(mod, __package__)


if os.environ.get("MVINFO_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as _impl

        BACKEND = "python"


def finalize(raw: np.ndarray) -> np.ndarray:
    """Apply the non-negativity conventions to raw kernel output (copy)."""
    out = np.array(raw, dtype=np.float64, copy=True)
    for name in _NONNEG:
        col = out[:, COLUMNS.index(name)]
        col[(col < 0) & (col > -NEG_FLOOR)] = 0.0
    for name in _PID:
        col = out[:, COLUMNS.index(name)]
        if np.any(col <= -CLAMP_TOL):
            bad = int(np.argmin(col))
            raise DecompositionError(f"{name} = {col[bad]:.3e} < 0 in row {bad}")
        col[col < 0] = 0.0
    return out


def triplet_counts(bins, backend: str | None = None) -> np.ndarray:
    return get_backend(backend).triplet_counts(np.ascontiguousarray(bins, dtype=np.uint8))


def binary_measures(pmf, backend: str | None = None) -> np.ndarray:
    """Finalized measure table, shape ``(n, len(COLUMNS))``, for rows of 2x2x2 pmfs."""
    return finalize(get_backend(backend).binary_measures(np.asarray(pmf, dtype=np.float64)))
