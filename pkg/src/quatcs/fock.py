"""Truncated right quaternionic Fock space over the monomial basis.

A :class:`FockVector` stores quaternion coefficients ``c_n`` with respect to
the fixed orthonormal basis ``Phi_n``.  Right scalars act as ``c_n q``; the
basis-induced left multiplication acts as ``q c_n``.
"""
from __future__ import annotations

import json
import math

import numpy as np

from . import _backend
from .errors import BasisMismatch, DimensionMismatch
from .quaternion import Quaternion, as_quaternion, qconj_arr, qmul_arr

MONOMIAL = "monomial"
DEFAULT_TRUNCATION = 64


class FockVector:
    """Immutable coefficient vector of length N (the truncation order)."""

    __slots__ = ("_coeffs", "basis_tag")

    def __init__(self, coeffs, basis_tag: str = MONOMIAL):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[1] != 4:
            raise DimensionMismatch(f"coefficients must have shape (N, 4), got {c.shape}")
        c.setflags(write=False)
        self._coeffs = c
        self.basis_tag = basis_tag

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def N(self) -> int:
        return self._coeffs.shape[0]

    def __len__(self):
        return self.N

    def __getitem__(self, n) -> Quaternion:
        return Quaternion.from_array(self._coeffs[n])

    def __repr__(self):
        return f"FockVector(N={self.N}, norm={self.norm():.6g})"

    def __add__(self, other):
        _check_compatible(self, other)
        return FockVector(self._coeffs + other._coeffs, self.basis_tag)

    def __sub__(self, other):
        _check_compatible(self, other)
        return FockVector(self._coeffs - other._coeffs, self.basis_tag)

    def __neg__(self):
        return FockVector(-self._coeffs, self.basis_tag)

    def norm_squared(self) -> float:
        return float(np.sum(self._coeffs ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def distance(self, other) -> float:
        return (self - other).norm()

    def left_scale(self, q) -> "FockVector":
        return left_scale(q, self)

    def right_scale(self, q) -> "FockVector":
        return right_scale(self, q)

    def padded(self, N: int) -> "FockVector":
        """Zero-extend (or cut) to truncation ``N``."""
        c = np.zeros((N, 4))
        m = min(N, self.N)
        c[:m] = self._coeffs[:m]
        return FockVector(c, self.basis_tag)

    def to_json(self) -> list:
        return [[float(x) for x in row] for row in self._coeffs]

    @classmethod
    def from_json(cls, data) -> "FockVector":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(np.asarray(data, dtype=float).reshape(-1, 4))


def _check_compatible(f, g):
    if f.basis_tag != g.basis_tag:
        raise BasisMismatch(f"bases differ: {f.basis_tag!r} vs {g.basis_tag!r}")
    if f.N != g.N:
        raise DimensionMismatch(f"truncation orders differ: {f.N} vs {g.N}")


def basis_vector(n: int, N: int = DEFAULT_TRUNCATION) -> FockVector:
    if not 0 <= n < N:
        raise DimensionMismatch(f"basis index {n} outside 0..{N - 1}")
    c = np.zeros((N, 4))
    c[n, 0] = 1.0
    return FockVector(c)


def vacuum(N: int = DEFAULT_TRUNCATION) -> FockVector:
    return basis_vector(0, N)


def inner(f: FockVector, g: FockVector) -> Quaternion:
    """``<f|g> = sum_n conj(c_n(f)) c_n(g)``; conjugate-linear on the left."""
    _check_compatible(f, g)
    return Quaternion.from_array(qmul_arr(qconj_arr(f.coeffs), g.coeffs).sum(axis=0))


def left_scale(q, phi: FockVector) -> FockVector:
    q = as_quaternion(q)
    return FockVector(qmul_arr(q.array, phi.coeffs), phi.basis_tag)


def right_scale(phi: FockVector, q) -> FockVector:
    q = as_quaternion(q)
    return FockVector(qmul_arr(phi.coeffs, q.array), phi.basis_tag)


def bargmann_kernel(q, p, n_terms: int) -> Quaternion:
    """Partial sum ``sum_{n < n_terms} q^n conj(p)^n / n!`` of the reproducing kernel."""
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    q, p = as_quaternion(q), as_quaternion(p)
    total, _ = _backend.impl.sandwich_series(
        q.array[None], np.array([[1.0, 0.0, 0.0, 0.0]]), p.conj().array[None],
        np.zeros(1), 0.0, n_terms)
    return Quaternion.from_array(total[0])


def random_vector(rng, N: int, scale: float = 1.0) -> FockVector:
    return FockVector(scale * rng.standard_normal((N, 4)))
