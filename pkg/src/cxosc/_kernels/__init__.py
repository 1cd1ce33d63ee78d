"""Hot-kernel backend selection.

The compiled extension (``_hot``) is preferred when it imported cleanly; the
NumPy implementation (``_ref``) is the fallback.  Set the environment
variable ``CXOSC_FORCE_FALLBACK=1`` before import to skip the extension,
e.g. for benchmarking or debugging.
"""

import os

from . import _ref

if os.environ.get("CXOSC_FORCE_FALLBACK"):
    _impl = _ref
    BACKEND = "python"
else:
    try:
        from . import _hot as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _ref
        BACKEND = "python"

hermite_table = _impl.hermite_table
fock_wigner = _impl.fock_wigner


def active_backend():
    """Name of the kernel backend in use: ``"compiled"`` or ``"python"``."""
    return BACKEND
