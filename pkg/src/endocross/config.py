"""Global numerical tolerances.

``tol()`` is used for every decision of the form "is this real number zero".
It defaults to 1e-9 and can be overridden once per process through the
``ENDOCROSS_TOL`` environment variable or at runtime with :func:`set_tol`.
"""

import os

PRUNE = 1e-14
_DEFAULT_TOL = 1e-9

_state = {"tol": None}


def tol():
    if _state["tol"] is None:
        raw = os.environ.get("ENDOCROSS_TOL")
        _state["tol"] = float(raw) if raw else _DEFAULT_TOL
    return _state["tol"]


def set_tol(value):
    value = float(value)
    if not value > 0:
        raise ValueError("tolerance must be positive")
    _state["tol"] = value
