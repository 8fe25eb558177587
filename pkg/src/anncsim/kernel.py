"""Stepping-kernel backend selection.

The compiled extension is preferred when present; the numpy fallback is
semantically identical. ANNCSIM_BACKEND=py|ext forces a choice (runs
restarted from a manifest pin the backend this way so traces stay
bit-identical).
"""

import os

from . import _kernel_py

try:
    from . import _core
except ImportError:
    _core = None


def available_backends():
    names = ["py"]
    if _core is not None:
        names.insert(0, "ext")
    return names


def get_backend(name: str = None):
    """Return the kernel module for ``name`` (or the environment/default
    choice). Raises RuntimeError if a forced backend is unavailable."""

    if name is None:
        name = os.environ.get("ANNCSIM_BACKEND", "auto")
    if name in ("auto", ""):
        return _core if _core is not None else _kernel_py
    if name == "py":
        return _kernel_py
    if name == "ext":
        if _core is None:
            raise RuntimeError(
                "compiled kernel requested via ANNCSIM_BACKEND=ext "
                "but anncsim._core is not built"
            )
        return _core
    raise ValueError(f"unknown backend {name!r}")


def backend_name(name: str = None) -> str:
    return get_backend(name).BACKEND
