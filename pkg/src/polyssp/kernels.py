"""Backend selection for the subset-sum kernels.

The compiled module is used when it imports and ``POLYSSP_PURE`` is unset;
otherwise the pure-Python twin.  Both give identical results.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

from . import _pykernels


def get_backend(name: str = "auto") -> ModuleType:
    """``"auto"``, ``"compiled"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "compiled":
        return importlib.import_module("polyssp._ckernels")
    if name != "auto":
        raise ValueError(f"unknown backend {name!r}")
    if os.environ.get("POLYSSP_PURE"):
        return _pykernels
    try:
        return importlib.import_module("polyssp._ckernels")
    except ImportError:
        return _pykernels


_backend = get_backend()
BACKEND: str = _backend.BACKEND
brute_dfs = _backend.brute_dfs
mitm_bottom = _backend.mitm_bottom
