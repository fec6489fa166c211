"""Kernel implementation selected at import.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``CHPLX_PURE_PYTHON`` is set to a non-empty value other
than ``0``, the numpy fallback is used.  Both expose the same functions.
"""

from __future__ import annotations

import importlib
import os

from . import _pykernels


def _load_compiled():
    try:
        return importlib.import_module("chplx_lite.runtime._ckernels")
    except ImportError:
        return None


compiled = _load_compiled()
python = _pykernels

if os.environ.get("CHPLX_PURE_PYTHON", "") not in ("", "0") or compiled is None:
    active = python
else:
    active = compiled

NAME = active.NAME
COMPILED_AVAILABLE = compiled is not None


def implementation(name: str | None = None):
    """Kernel module by name (``compiled`` or ``python``); the active one by default."""
    if name is None:
        return active
    if name == "python":
        return python
    if name == "compiled":
        if compiled is None:
            raise RuntimeError("the compiled kernels are not built")
        return compiled
    raise ValueError(f"unknown kernel implementation {name!r}")
