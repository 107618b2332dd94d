"""Backend selection for the hot evolution kernel.

The compiled extension is used when it imports; setting
``FIELDANNEAL_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _pykernels

python_backend = _pykernels.evolve_dopri5

try:
    if os.environ.get("FIELDANNEAL_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from ._kernels import evolve_dopri5 as compiled_backend
    BACKEND = "cython"
except ImportError:
    compiled_backend = None
    BACKEND = "python"


def get_backend(name=None):
    """Return the evolution kernel for ``name`` ("cython", "python" or None for the default)."""
    if name is None:
        name = BACKEND
    if name == "python":
        return python_backend
    if name == "cython":
        if compiled_backend is None:
            raise RuntimeError("compiled kernel not available; rebuild with `pip install -e .`")
        return compiled_backend
    raise ValueError(f"unknown backend {name!r}")
