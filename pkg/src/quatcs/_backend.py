"""Select the kernel implementation at import time.

The compiled extension is used when it imports cleanly, unless the
``QUATCS_PURE_PYTHON`` environment variable is set to a non-empty value.
"""
import os

from . import _pure

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and not os.environ.get("QUATCS_PURE_PYTHON"):
    impl = _compiled
else:
    impl = _pure

NAME = impl.NAME


def available():
    """Names of the importable backends."""
    return ["python"] + (["compiled"] if _compiled is not None else [])


def get(name):
    if name == "python":
        return _pure
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
