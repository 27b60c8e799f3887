"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``GENHILBERT_PURE_PYTHON`` is set to a non-empty
value other than ``0``, the numpy fallback is used. ``BACKEND`` names the
active one.
"""
import os

from . import _pykernels

if os.environ.get("GENHILBERT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

hankel_matvec = _impl.hankel_matvec
horner = _impl.horner
alternating_differences = _impl.alternating_differences
