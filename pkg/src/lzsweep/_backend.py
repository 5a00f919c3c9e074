"""Select the kernel implementation at import time.

The compiled extension is used when it was built; set
``LZSWEEP_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels as python_kernels

compiled_kernels = None
if os.environ.get("LZSWEEP_PURE_PYTHON", "") != "1":
    try:
        from . import _kernels as compiled_kernels
    except ImportError:  # extension not built
        compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
NAME = "cython" if compiled_kernels is not None else "numpy"


def get(name=None):
    """Return the kernel module called ``name`` (``"cython"`` or ``"numpy"``)."""
    if name is None:
        return kernels
    if name == "numpy":
        return python_kernels
    if name == "cython":
        if compiled_kernels is None:
            raise ImportError("compiled kernels are not available")
        return compiled_kernels
    raise ValueError(f"unknown backend {name!r}")
