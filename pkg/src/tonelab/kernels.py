"""Kernel selection.

The compiled extension ``tonelab._kernels`` is preferred; the pure-Python
implementation in ``tonelab._pykernels`` is used when the extension was not
built or when ``TONELAB_PURE=1`` is set in the environment.
"""

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("TONELAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

integrate_linear2 = _impl.integrate_linear2
py_integrate_linear2 = _pykernels.integrate_linear2

__all__ = ["BACKEND", "integrate_linear2", "py_integrate_linear2"]
