"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python
module is the fallback.  `JACOBI_EDGE_BACKEND` forces the choice
("compiled" raises if the extension is missing, "python" skips it).
"""

import importlib
import os

from . import _kernels_py


def load_backend(name):
    """Return the kernel module for an explicit backend name."""
    if name == "python":
        return _kernels_py
    if name == "compiled":
        return importlib.import_module("jacobiedge._kernels")
    raise ValueError(f"unknown backend {name!r}")


def _select():
    forced = os.environ.get("JACOBI_EDGE_BACKEND", "").strip().lower()
    if forced:
        return load_backend(forced)
    try:
        return load_backend("compiled")
    except ImportError:
        return _kernels_py


kernels = _select()
BACKEND_NAME = kernels.BACKEND_NAME
