"""Quaternion arithmetic, the 2x2 complex representation, polar and slice forms.

Two representations live side by side. :class:`Quaternion` is an immutable
scalar used at API boundaries; arrays with a trailing axis of length 4
(components ``q0, q1, q2, q3``) carry vectors and matrices of quaternions,
and the ``q*`` array functions below operate on them with broadcasting.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import BadAxis, MalformedMatrix, ParseError

__all__ = [
    "Quaternion", "ComplexMatrix2", "PolarForm", "SliceElement",
    "qmul", "qconj", "qnorm", "as_quaternion",
    "to_matrix", "from_matrix", "polar", "reconstruct", "sigma_matrix",
    "qexp", "star_exp", "slice_decompose", "check_axis", "parse_quaternion",
    "qmul_arr", "qconj_arr", "qabs_arr", "to_matrix_arr",
]

SCALAR_TOL = 1e-12


# -- array level --------------------------------------------------------------

def qmul_arr(p, q):
    """Hamilton product of quaternion arrays, broadcasting over leading axes."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    p0, p1, p2, p3 = np.moveaxis(p, -1, 0)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    return np.stack([
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    ], axis=-1)


def qconj_arr(q):
    q = np.array(q, dtype=float, copy=True)
    q[..., 1:] *= -1.0
    return q


def qabs_arr(q):
    return np.sqrt(np.sum(np.asarray(q, dtype=float) ** 2, axis=-1))


def to_matrix_arr(q):
    """Complex 2x2 images of a quaternion array, shape ``(..., 2, 2)``."""
    q = np.asarray(q, dtype=float)
    q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
    m = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = q0 + 1j * q3
    m[..., 0, 1] = -q2 + 1j * q1
    m[..., 1, 0] = q2 + 1j * q1
    m[..., 1, 1] = q0 - 1j * q3
    return m


def from_matrix_arr(m, tol=1e-10):
    """Inverse of :func:`to_matrix_arr`; raises MalformedMatrix off the image."""
    m = np.asarray(m, dtype=complex)
    a, b = m[..., 0, 0], m[..., 0, 1]
    c, d = m[..., 1, 0], m[..., 1, 1]
    # image condition: d = conj(a), c = -conj(b)
    bad = max(np.max(np.abs(d - np.conj(a)), initial=0.0),
              np.max(np.abs(c + np.conj(b)), initial=0.0))
    if bad > tol:
        raise MalformedMatrix(f"matrix deviates from quaternion shape by {bad:.3e}")
    return np.stack([
        0.5 * (a + d).real,
        0.5 * (b + c).imag,
        0.5 * (c - b).real,
        0.5 * (a - d).imag,
    ], axis=-1)


# -- scalar type --------------------------------------------------------------

@dataclass(frozen=True)
class Quaternion:
    """``q0 + q1 i + q2 j + q3 k`` with double precision components."""

    q0: float = 0.0
    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float).reshape(4)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3], dtype=float)

    @property
    def real(self) -> float:
        return self.q0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.q1, self.q2, self.q3], dtype=float)

    def conj(self) -> "Quaternion":
        return Quaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def norm(self) -> float:
        return math.hypot(self.q0, self.q1, self.q2, self.q3)

    def is_real(self, tol: float = 0.0) -> bool:
        return max(abs(self.q1), abs(self.q2), abs(self.q3)) <= tol

    def inverse(self) -> "Quaternion":
        n2 = self.q0 ** 2 + self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        return Quaternion(c.q0 / n2, c.q1 / n2, c.q2 / n2, c.q3 / n2)

    def __abs__(self):
        return self.norm()

    def __neg__(self):
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __add__(self, other):
        o = as_quaternion(other)
        return Quaternion(self.q0 + o.q0, self.q1 + o.q1, self.q2 + o.q2, self.q3 + o.q3)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-as_quaternion(other))

    def __rsub__(self, other):
        return as_quaternion(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.q0 * other, self.q1 * other, self.q2 * other, self.q3 * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return qmul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            # divide componentwise: 1/x overflows for subnormal x
            return Quaternion.from_array(self.array / float(other))
        return NotImplemented

    def __str__(self):
        return format_quaternion(self)


def as_quaternion(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return Quaternion(float(x))
    if isinstance(x, str):
        return parse_quaternion(x)
    return Quaternion.from_array(x)


I_UNIT = Quaternion(0.0, 1.0, 0.0, 0.0)
J_UNIT = Quaternion(0.0, 0.0, 1.0, 0.0)
K_UNIT = Quaternion(0.0, 0.0, 0.0, 1.0)


def qmul(p, q) -> Quaternion:
    p, q = as_quaternion(p), as_quaternion(q)
    return Quaternion(
        p.q0 * q.q0 - p.q1 * q.q1 - p.q2 * q.q2 - p.q3 * q.q3,
        p.q0 * q.q1 + p.q1 * q.q0 + p.q2 * q.q3 - p.q3 * q.q2,
        p.q0 * q.q2 - p.q1 * q.q3 + p.q2 * q.q0 + p.q3 * q.q1,
        p.q0 * q.q3 + p.q1 * q.q2 - p.q2 * q.q1 + p.q3 * q.q0,
    )


def qconj(q) -> Quaternion:
    return as_quaternion(q).conj()


def qnorm(q) -> float:
    return as_quaternion(q).norm()


# -- matrix representation -----------------------------------------------------

ComplexMatrix2 = np.ndarray  # shape (2, 2), complex


def to_matrix(q) -> ComplexMatrix2:
    return to_matrix_arr(as_quaternion(q).array)


def from_matrix(m, tol: float = 1e-10) -> Quaternion:
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise MalformedMatrix(f"expected a 2x2 matrix, got shape {m.shape}")
    return Quaternion.from_array(from_matrix_arr(m, tol))


SIGMA0 = np.eye(2, dtype=complex)


def sigma_matrix(phi: float, psi: float) -> ComplexMatrix2:
    """Unit direction matrix; self-adjoint and squares to the identity."""
    return np.array([
        [math.cos(phi), math.sin(phi) * np.exp(1j * psi)],
        [math.sin(phi) * np.exp(-1j * psi), -math.cos(phi)],
    ], dtype=complex)


@dataclass(frozen=True)
class PolarForm:
    r: float
    theta: float
    phi: float
    psi: float

    @property
    def sigma_n(self) -> ComplexMatrix2:
        return sigma_matrix(self.phi, self.psi)

    @property
    def axis(self) -> Quaternion:
        """Unit imaginary quaternion whose image is ``sqrt(-1) * sigma_n``."""
        s = math.sin(self.phi)
        # exact zeros on the equator keep the real-input convention axis = i exact
        c = 0.0 if self.phi == math.pi / 2 else math.cos(self.phi)
        cp = 1.0 if self.psi == 0.0 else math.cos(self.psi)
        sp = 0.0 if self.psi == 0.0 else math.sin(self.psi)
        return Quaternion(0.0, s * cp, s * sp, c)

    def phase(self) -> Quaternion:
        """``exp(i theta sigma_n)`` as a quaternion (unit modulus)."""
        u = self.axis
        return Quaternion(math.cos(self.theta)) + u * math.sin(self.theta)

    def phase_matrix(self) -> ComplexMatrix2:
        return math.cos(self.theta) * SIGMA0 + 1j * math.sin(self.theta) * self.sigma_n

    def matrix(self) -> ComplexMatrix2:
        return self.r * self.phase_matrix()


def polar(q) -> PolarForm:
    """Polar coordinates ``(r, theta, phi, psi)``.

    Real inputs (including zero) get ``phi = pi/2, psi = 0`` so that the
    direction matrix corresponds to the imaginary unit ``i``.
    """
    q = as_quaternion(q)
    r = q.norm()
    v = q.vector
    vn = math.hypot(*v)
    if r == 0.0:
        return PolarForm(0.0, 0.0, math.pi / 2, 0.0)
    theta = math.atan2(vn, q.q0)
    if vn == 0.0:
        return PolarForm(r, theta, math.pi / 2, 0.0)
    phi = math.atan2(math.hypot(v[0], v[1]), v[2])  # acos loses digits near the poles
    psi = math.atan2(v[1], v[0]) % (2 * math.pi)
    if psi >= 2 * math.pi:  # a tiny negative angle can round up to 2 pi
        psi = 0.0
    return PolarForm(r, theta, phi, psi)


def reconstruct(pf: PolarForm) -> Quaternion:
    return pf.phase() * pf.r


# -- slices ---------------------------------------------------------------------

def check_axis(axis, tol: float = 1e-12) -> Quaternion:
    """Return ``axis`` as a Quaternion after checking it is a unit imaginary."""
    u = as_quaternion(axis)
    if abs(u.q0) > tol or abs(u.norm() - 1.0) > tol:
        raise BadAxis(f"{u} is not a unit imaginary quaternion")
    return u


@dataclass(frozen=True)
class SliceElement:
    x: float
    y: float
    axis: Quaternion

    @property
    def value(self) -> Quaternion:
        return Quaternion(self.x) + self.axis * self.y


def slice_decompose(q) -> SliceElement:
    """Write ``q = x + I y`` with ``y >= 0``; real ``q`` gets ``I = i``."""
    q = as_quaternion(q)
    v = q.vector
    y = math.hypot(*v)
    if y == 0.0:
        return SliceElement(q.q0, 0.0, I_UNIT)
    w = v / np.abs(v).max()  # rescale first so subnormal inputs keep full precision
    u = w / math.hypot(*w)
    return SliceElement(q.q0, y, Quaternion(0.0, *map(float, u)))


def qexp(q) -> Quaternion:
    s = slice_decompose(q)
    ex = math.exp(s.x)
    return Quaternion(ex * math.cos(s.y)) + s.axis * (ex * math.sin(s.y))


STAR_TOL = 1e-16


def star_exp(p, q, tol: float = STAR_TOL) -> Quaternion:
    """Sum of ``p^m q^m / m!`` (the star exponential), to remainder bound ``tol``."""
    p, q = as_quaternion(p), as_quaternion(q)
    x = p.norm() * q.norm()
    total, _ = _backend.impl.sandwich_series(
        p.array[None], np.array([[1.0, 0, 0, 0]]), q.array[None],
        np.array([x]), tol, 10_000)
    return Quaternion.from_array(total[0])


# -- literal syntax -------------------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)?([ijk]?)")


def parse_quaternion(text: str) -> Quaternion:
    """Parse ``a+bi+cj+dk`` (terms optional, any order, no spaces)."""
    if not isinstance(text, str) or not text:
        raise ParseError("empty quaternion literal", str(text), 1)
    comps = [0.0, 0.0, 0.0, 0.0]
    seen = set()
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        sign, num, unit = m.groups()
        if m.end() == pos or (not num and not unit):
            raise ParseError(f"unexpected {text[pos]!r} at column {pos + 1}", text, pos + 1)
        end = m.end()
        if end < len(text) and text[end] not in "+-":
            bad = text[end]
            what = "missing sign before" if (bad.isdigit() or bad in ".ijk") else "unexpected"
            raise ParseError(f"{what} {bad!r} at column {end + 1}", text, end + 1)
        if pos > 0 and not sign:
            raise ParseError(f"missing sign before {text[pos:m.end()]!r} at column {pos + 1}",
                             text, pos + 1)
        idx = " ijk".index(unit) if unit else 0
        if idx in seen:
            raise ParseError(f"repeated term {text[pos:m.end()]!r} at column {pos + 1}",
                             text, pos + 1)
        seen.add(idx)
        value = float(num) if num else 1.0
        comps[idx] = -value if sign == "-" else value
        pos = m.end()
    return Quaternion(*comps)


def format_quaternion(q, fmt: str = "{:.17g}") -> str:
    q = as_quaternion(q)
    out = fmt.format(q.q0)
    for c, u in zip((q.q1, q.q2, q.q3), "ijk"):
        s = fmt.format(c)
        out += (s if s.startswith("-") else "+" + s) + u
    return out
