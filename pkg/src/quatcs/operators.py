"""Right-linear operators on the truncated Fock space as quaternion matrices.

Entries act from the left on coefficient vectors, ``(A phi)_k = sum_n A_kn c_n``,
which commutes with right scalar multiplication.  Left operator scaling
``q.A`` multiplies every entry by ``q`` on the left; right scaling ``A.q``
multiplies on the right.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import BasisMismatch, DimensionMismatch, MalformedMatrix, NotInImage
from .fock import MONOMIAL, FockVector
from .quaternion import as_quaternion, from_matrix_arr, qconj_arr, qmul_arr, to_matrix_arr

EMBED_TOL = 1e-10
EXPM_DRIFT_TOL = 1e-8


def qmatmul(A, B):
    """Product of quaternion matrices stored as ``(n, m, 4)`` and ``(m, p, 4)``.

    Sixteen real products in a fixed order, so the result does not depend on
    anything but the BLAS used for the real products.
    """
    # contiguous component planes keep the real products on the BLAS fast path
    a0, a1, a2, a3 = np.ascontiguousarray(np.moveaxis(A, -1, 0))
    b0, b1, b2, b3 = np.ascontiguousarray(np.moveaxis(B, -1, 0))
    return np.stack([
        a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3,
        a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2,
        a0 @ b2 - a1 @ b3 + a2 @ b0 + a3 @ b1,
        a0 @ b3 + a1 @ b2 - a2 @ b1 + a3 @ b0,
    ], axis=-1)


class FockOperator:
    """N x N quaternion matrix in the fixed monomial basis."""

    __slots__ = ("_entries", "basis_tag")

    def __init__(self, entries, basis_tag: str = MONOMIAL):
        e = np.array(entries, dtype=float)
        if e.ndim != 3 or e.shape[0] != e.shape[1] or e.shape[2] != 4:
            raise DimensionMismatch(f"entries must have shape (N, N, 4), got {e.shape}")
        e.setflags(write=False)
        self._entries = e
        self.basis_tag = basis_tag

    @classmethod
    def from_real(cls, m) -> "FockOperator":
        m = np.asarray(m, dtype=float)
        e = np.zeros(m.shape + (4,))
        e[..., 0] = m
        return cls(e)

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def N(self) -> int:
        return self._entries.shape[0]

    def __repr__(self):
        return f"FockOperator(N={self.N})"

    def _check(self, other):
        if other.basis_tag != self.basis_tag:
            raise BasisMismatch(f"bases differ: {self.basis_tag!r} vs {other.basis_tag!r}")
        if other.N != self.N:
            raise DimensionMismatch(f"dimensions differ: {self.N} vs {other.N}")

    def __add__(self, other):
        self._check(other)
        return FockOperator(self._entries + other._entries, self.basis_tag)

    def __sub__(self, other):
        self._check(other)
        return FockOperator(self._entries - other._entries, self.basis_tag)

    def __neg__(self):
        return FockOperator(-self._entries, self.basis_tag)

    def __mul__(self, r):
        if isinstance(r, (int, float)):
            return FockOperator(self._entries * float(r), self.basis_tag)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, r):
        return self * (1.0 / r)

    def __matmul__(self, other):
        if isinstance(other, FockVector):
            return self.apply(other)
        return compose(self, other)

    def apply(self, phi: FockVector) -> FockVector:
        if phi.basis_tag != self.basis_tag:
            raise BasisMismatch(f"bases differ: {self.basis_tag!r} vs {phi.basis_tag!r}")
        if phi.N != self.N:
            raise DimensionMismatch(f"operator is {self.N}-dimensional, vector has {phi.N}")
        return FockVector(qmatmul(self._entries, phi.coeffs[:, None, :])[:, 0, :], phi.basis_tag)

    def adjoint(self) -> "FockOperator":
        return adjoint(self)

    @property
    def dag(self) -> "FockOperator":
        return adjoint(self)

    def block(self, m: int) -> np.ndarray:
        """Top-left ``m x m`` block of the entries."""
        return self._entries[:m, :m]

    def max_abs(self, m: int | None = None) -> float:
        """Largest entry modulus, optionally over the top-left ``m x m`` block."""
        e = self._entries if m is None else self._entries[:m, :m]
        if e.size == 0:
            return 0.0
        return float(np.sqrt((e ** 2).sum(-1)).max())

    def frobenius(self) -> float:
        return float(np.sqrt((self._entries ** 2).sum()))


# -- constructors ---------------------------------------------------------------

def identity(N: int) -> FockOperator:
    return FockOperator.from_real(np.eye(N))


def zeros(N: int) -> FockOperator:
    return FockOperator(np.zeros((N, N, 4)))


def scalar(q, N: int) -> FockOperator:
    """The left-scaled identity ``q.I``."""
    return left_scale_op(q, identity(N))


def ladder_a(N: int) -> FockOperator:
    """Annihilation operator; ``a Phi_n = sqrt(n) Phi_{n-1}``."""
    if N < 2:
        raise ValueError("ladder operators need N >= 2")
    return FockOperator.from_real(np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1))


def ladder_adag(N: int) -> FockOperator:
    """Creation operator; ``adag Phi_{N-1} = 0`` is a truncation artifact."""
    if N < 2:
        raise ValueError("ladder operators need N >= 2")
    return FockOperator.from_real(np.diag(np.sqrt(np.arange(1, N, dtype=float)), -1))


def number_op(N: int) -> FockOperator:
    if N < 2:
        raise ValueError("number operator needs N >= 2")
    return FockOperator.from_real(np.diag(np.arange(N, dtype=float)))


def hamiltonian(N: int) -> FockOperator:
    return number_op(N) + identity(N) * 0.5


# -- algebra ----------------------------------------------------------------------

def compose(A: FockOperator, B: FockOperator) -> FockOperator:
    A._check(B)
    return FockOperator(qmatmul(A.entries, B.entries), A.basis_tag)


def adjoint(A: FockOperator) -> FockOperator:
    return FockOperator(qconj_arr(np.swapaxes(A.entries, 0, 1)), A.basis_tag)


def commutator(A: FockOperator, B: FockOperator) -> FockOperator:
    return compose(A, B) - compose(B, A)


def anticommutator(A: FockOperator, B: FockOperator) -> FockOperator:
    return compose(A, B) + compose(B, A)


def left_scale_op(q, A: FockOperator) -> FockOperator:
    """``(q.A) phi = q.(A phi)``."""
    return FockOperator(qmul_arr(as_quaternion(q).array, A.entries), A.basis_tag)


def right_scale_op(A: FockOperator, q) -> FockOperator:
    """``(A.q) phi = A (q.phi)``."""
    return FockOperator(qmul_arr(A.entries, as_quaternion(q).array), A.basis_tag)


def conjugate_by(U: FockOperator, A: FockOperator) -> FockOperator:
    """``U^dagger A U``."""
    return compose(adjoint(U), compose(A, U))


# -- complex embedding -------------------------------------------------------------

def embed(A: FockOperator) -> np.ndarray:
    """2N x 2N complex matrix whose 2x2 blocks are the images of the entries."""
    N = A.N
    m = to_matrix_arr(A.entries)  # (N, N, 2, 2)
    return m.transpose(0, 2, 1, 3).reshape(2 * N, 2 * N)


def unembed(E, tol: float = EMBED_TOL) -> FockOperator:
    E = np.asarray(E, dtype=complex)
    if E.ndim != 2 or E.shape[0] != E.shape[1] or E.shape[0] % 2:
        raise NotInImage(f"expected a square matrix of even size, got {E.shape}")
    N = E.shape[0] // 2
    blocks = E.reshape(N, 2, N, 2).transpose(0, 2, 1, 3)
    try:
        return FockOperator(from_matrix_arr(blocks, tol))
    except MalformedMatrix as exc:
        raise NotInImage(str(exc)) from None


_TAYLOR_DEGREE = 16


def expm_complex(M) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a Taylor kernel.

    The matrix is scaled by ``2^-s`` until its 1-norm is below 0.5, the
    degree-16 Taylor polynomial is evaluated by Horner's rule, and the
    result is squared ``s`` times.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    norm = np.abs(M).sum(axis=0).max() if n else 0.0
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    X = M / (2.0 ** s)
    eye = np.eye(n, dtype=complex)
    E = eye.copy()
    for k in range(_TAYLOR_DEGREE, 0, -1):
        E = eye + (X @ E) / k
    for _ in range(s):
        E = E @ E
    return E


def expm(A: FockOperator) -> FockOperator:
    return unembed(expm_complex(embed(A)), tol=EXPM_DRIFT_TOL)


def is_unitary(A: FockOperator, tol: float = 1e-8) -> bool:
    return unitarity_defect(A) <= tol


def unitarity_defect(A: FockOperator) -> float:
    return (compose(adjoint(A), A) - identity(A.N)).max_abs()


def is_antihermitian(A: FockOperator, tol: float = 1e-12) -> bool:
    return (adjoint(A) + A).max_abs() <= tol


def is_selfadjoint(A: FockOperator, tol: float = 1e-12) -> bool:
    return (adjoint(A) - A).max_abs() <= tol


# -- truncation bookkeeping ---------------------------------------------------------

def ladder_safe_dimension(N: int, degree: int) -> int:
    """Leading levels on which a polynomial ladder identity of total degree
    ``degree`` is unaffected by the cut at level N."""
    return max(0, N - degree)


LEAK_TOL = 1e-5
LEAK_MARGIN = 8


def safe_dimension(U: FockOperator, degree: int, leak_tol: float = LEAK_TOL,
                   margin: int = LEAK_MARGIN) -> int:
    """Leading columns of a truncated exponential that never feel the cut.

    Column n counts as safe when its weight on the top ``degree + margin``
    levels is below ``leak_tol``.  Conjugation identities built from such
    columns are accurate to roughly ``leak_tol**2``.
    """
    N = U.N
    lo = N - degree - margin
    if lo <= 0:
        return 0
    leak = np.sqrt((U.entries[lo:] ** 2).sum(axis=(0, 2)))
    bad = np.nonzero(leak > leak_tol)[0]
    m = int(bad[0]) if bad.size else N
    return min(m, ladder_safe_dimension(N, degree))
