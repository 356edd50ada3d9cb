"""Quaternionic coherent-state machinery on a truncated right Fock space."""
from . import _backend
from .errors import *  # noqa: F401,F403
from .quaternion import (Quaternion, PolarForm, SliceElement, qmul, qconj, qnorm,
                         to_matrix, from_matrix, polar, reconstruct, qexp, star_exp,
                         slice_decompose, parse_quaternion)

BACKEND = _backend.NAME
__version__ = "0.1.0"
