"""Kernel backend selection.

The hot numeric kernels exist twice: numba-jitted (``_kernels_numba``) and
pure numpy (``_kernels_numpy``).  The active backend is chosen at import
time from the ``FLOWSPEC_BACKEND`` environment variable:

    FLOWSPEC_BACKEND=numba   force the jitted kernels (error if numba missing)
    FLOWSPEC_BACKEND=numpy   force the pure-numpy fallback
    FLOWSPEC_BACKEND=auto    numba if importable, else numpy (default)

``use_backend`` switches at runtime; the benchmark and the backend tests
rely on it.
"""

import os

from . import _kernels_numpy

_modules = {"numpy": _kernels_numpy}
_active = "numpy"


def _load_numba():
    if "numba" in _modules:
        return _modules["numba"]
    try:
        from . import _kernels_numba
    except ImportError:
        return None
    _modules["numba"] = _kernels_numba
    return _kernels_numba


def available_backends():
    names = ["numpy"]
    if _load_numba() is not None:
        names.append("numba")
    return names


def use_backend(name):
    """Select the kernel backend ('numpy' or 'numba')."""
    global _active
    if name == "numpy":
        _active = "numpy"
    elif name == "numba":
        if _load_numba() is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        _active = "numba"
    else:
        raise ValueError(f"unknown backend {name!r}; expected 'numpy' or 'numba'")


def active_backend():
    return _active


def kernels():
    """Module holding the active kernel implementations."""
    return _modules[_active]


def _init_from_env():
    choice = os.environ.get("FLOWSPEC_BACKEND", "auto").strip().lower()
    if choice == "numpy":
        use_backend("numpy")
    elif choice == "numba":
        use_backend("numba")
    elif choice in ("", "auto"):
        use_backend("numba" if _load_numba() is not None else "numpy")
    else:
        raise ValueError(
            f"FLOWSPEC_BACKEND={choice!r} not understood; use auto, numba or numpy")


_init_from_env()
