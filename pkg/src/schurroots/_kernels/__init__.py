"""Kernel backend selection.

The compiled Cython extension `_speedups` is preferred when importable;
otherwise the NumPy implementations are used. Set SCHURROOTS_KERNELS to
"compiled" or "numpy" to force a backend ("compiled" raises if the
extension is missing).
"""

import os

from . import _numpy as _np_backend

_FUNCS = (
    "polyval_matrix",
    "cauchy_sum",
    "cauchy_sum_many",
    "resolvent_sum",
    "resolvent_cauchy_sum",
    "sandwich_sum",
)

_choice = os.environ.get("SCHURROOTS_KERNELS", "auto").lower()

_backend = None
if _choice in ("auto", "compiled"):
    try:
        from . import _speedups as _backend  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "compiled":
            raise
        _backend = None
if _backend is None:
    _backend = _np_backend

BACKEND = "compiled" if _backend is not _np_backend else "numpy"

polyval_matrix = _backend.polyval_matrix
cauchy_sum = _backend.cauchy_sum
cauchy_sum_many = _backend.cauchy_sum_many
resolvent_sum = _backend.resolvent_sum
resolvent_cauchy_sum = _backend.resolvent_cauchy_sum
sandwich_sum = _backend.sandwich_sum

numpy_backend = _np_backend


def backend_name() -> str:
    return BACKEND
