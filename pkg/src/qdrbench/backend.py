"""Kernel backend selection: compiled Cython extension with numpy fallback.

Set ``QDRBENCH_BACKEND=pure`` to force the fallback (used by the parity
tests and the backend benchmark).
"""

import os

from . import _purekern

try:
    from . import _fastkern
except ImportError:  # extension not built; fall back silently
    _fastkern = None


def available_backends():
    names = ["pure"]
    if _fastkern is not None:
        names.insert(0, "compiled")
    return names


def get_backend(name):
    if name == "pure":
        return _purekern
    if name == "compiled":
        if _fastkern is None:
            raise RuntimeError("compiled backend requested but not built")
        return _fastkern
    raise ValueError(f"unknown backend {name!r}")


def _select():
    forced = os.environ.get("QDRBENCH_BACKEND")
    if forced:
        return get_backend(forced)
    return _fastkern if _fastkern is not None else _purekern


kernels = _select()
BACKEND_NAME = kernels.NAME
