"""Select the kernel backend at import time.

The compiled extension is preferred. Setting ``MORTONVOX_PURE=1`` forces the
numpy fallback, which is also used when the extension is not built.
"""
import os

from . import _pykernels

kernels = _pykernels
if os.environ.get("MORTONVOX_PURE", "0") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:  # extension not compiled
        kernels = _pykernels

BACKEND = kernels.NAME


def get(name=None):
    """Return a kernel module by name (``"cython"`` or ``"python"``)."""
    if name is None:
        return kernels
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
