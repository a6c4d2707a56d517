"""Backend selection for the convolution kernel.

The compiled extension is used when it was built; otherwise the numpy
implementation is picked at import time. :func:`use_backend` switches
explicitly (the benchmark and the tests use it to compare both).
"""

from . import _kernel_py

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

_active = {"name": "compiled" if _compiled is not None else "python"}


def available_backends():
    return ["compiled", "python"] if _compiled is not None else ["python"]


def backend():
    return _active["name"]


def use_backend(name):
    """Select ``"compiled"`` or ``"python"``; returns the previous choice."""
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _compiled is None:
        raise RuntimeError("the compiled kernel is not available in this build")
    prev = _active["name"]
    _active["name"] = name
    return prev


def star_pairs(*args):
    if _active["name"] == "compiled":
        return _compiled.star_pairs(*args)
    return _kernel_py.star_pairs(*args)
