"""Kernel backend selection.

The compiled extension is used when it imports cleanly; setting the
environment variable ``WEDGECERT_PURE=1`` forces the pure backend (the
benchmark and the cross-checking tests rely on this).  Both backends
implement ``conv_tri``, ``conv_lin`` and ``tri_len`` with identical
semantics on Python-int coefficient lists.
"""

import os

from . import pure as _pure

if os.environ.get("WEDGECERT_PURE"):
    _impl = _pure
else:
    try:
        from . import _fastconv as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND
conv_tri = _impl.conv_tri
conv_lin = _impl.conv_lin
tri_len = _pure.tri_len


def get_backend(name: str):
    """Return a specific backend module ('pure' or 'cython') for comparison."""
    if name == "pure":
        return _pure
    if name == "cython":
        from . import _fastconv  # type: ignore[attr-defined]

        return _fastconv
    raise ValueError(f"unknown backend {name!r}")
