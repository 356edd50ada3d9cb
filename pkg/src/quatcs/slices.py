"""Displacement/squeeze conjugation identities restricted to one quaternion slice.

Inside a slice ``C_I`` all scalars commute, so the complex two-photon and
squeezed-coherent formulas carry over.  Every check here computes the
conjugated operator numerically (``lhs``) and assembles the closed form
(``rhs``) from left-scaled ladder monomials, then compares them on the
leading levels that the truncated exponentials resolve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SliceMismatch
from .operators import (FockOperator, compose, conjugate_by, identity, ladder_a,
                        ladder_adag, left_scale_op, number_op, safe_dimension, scalar)
from .quaternion import I_UNIT, Quaternion, as_quaternion, check_axis
from .states import displacement, squeeze

WHICH = ("a", "adag", "N")
SLICE_TOL = 1e-12


def in_slice(q: Quaternion, axis: Quaternion, tol: float = SLICE_TOL) -> bool:
    """True when ``q`` lies in ``R + axis R``."""
    v = q.vector
    u = axis.vector
    return float((v - (v @ u) * u) @ (v - (v @ u) * u)) <= tol * tol


@dataclass(frozen=True)
class SlicePair:
    axis: Quaternion
    p: Quaternion
    q: Quaternion

    def __post_init__(self):
        object.__setattr__(self, "axis", check_axis(self.axis))
        object.__setattr__(self, "p", as_quaternion(self.p))
        object.__setattr__(self, "q", as_quaternion(self.q))
        for name in ("p", "q"):
            if not in_slice(getattr(self, name), self.axis):
                raise SliceMismatch(f"{name}={getattr(self, name)} is not in the slice of {self.axis}")

    @classmethod
    def from_polar(cls, axis, p_abs, theta_p, q_abs, theta_q) -> "SlicePair":
        u = check_axis(axis)

        def on_slice(r, t):
            return Quaternion(r * math.cos(t)) + u * (r * math.sin(t))
        return cls(u, on_slice(p_abs, theta_p), on_slice(q_abs, theta_q))

    @property
    def I_p(self) -> Quaternion:
        return _phase(self.p, self.axis)

    @property
    def I_q(self) -> Quaternion:
        return _phase(self.q, self.axis)


def _phase(x: Quaternion, axis: Quaternion) -> Quaternion:
    r = x.norm()
    return x / r if r > 0 else Quaternion(1.0)


@dataclass(frozen=True)
class ConjugationResult:
    lhs: FockOperator
    rhs: FockOperator
    max_dev: float
    safe_dim: int

    def to_json(self) -> dict:
        return {"max_dev": self.max_dev, "safe_dim": self.safe_dim}


def _ladder(which: str, N: int) -> FockOperator:
    a, ad = ladder_a(N), ladder_adag(N)
    if which == "a":
        return a
    if which == "adag":
        return ad
    if which == "N":
        return compose(ad, a)
    raise ValueError(f"which must be one of {WHICH}, got {which!r}")


def _degree(which: str) -> int:
    return 2 if which in ("a", "adag") else 4


def two_photon_rhs(p: Quaternion, q: Quaternion, which: str, N: int) -> FockOperator:
    """Closed form of ``D(q)^dag S(p)^dag A S(p) D(q)`` for slice-sharing p, q."""
    r = p.norm()
    ph = _phase(p, I_UNIT)
    c, s = math.cosh(r), math.sinh(r)
    a, ad = ladder_a(N), ladder_adag(N)
    L = left_scale_op
    qc = q.conj()
    if which == "a":
        return a * c + L(ph * s, ad) + scalar(q * c + ph * s * qc, N)
    if which == "adag":
        return ad * c + L(ph.conj() * s, a) + scalar(qc * c + ph.conj() * s * q, N)
    if which == "N":
        one = identity(N)
        q2 = q.norm() ** 2
        sh2 = 0.5 * math.sinh(2 * r)
        g1 = number_op(N) + L(q, ad) + L(qc, a) + one * q2
        g2 = compose(a, a) + L(q * 2.0, a) + scalar(q * q, N)
        g3 = compose(ad, ad) + L(qc * 2.0, ad) + scalar(qc * qc, N)
        g4 = compose(a, ad) + L(qc, a) + L(q, ad) + one * q2
        return g1 * (c * c) + L(ph.conj() * sh2, g2) + L(ph * sh2, g3) + g4 * (s * s)
    raise ValueError(f"which must be one of {WHICH}, got {which!r}")


def squeezed_coherent_rhs(p: Quaternion, q: Quaternion, which: str, N: int) -> FockOperator:
    """Closed form of ``S(p)^dag D(q)^dag A D(q) S(p)`` for slice-sharing p, q."""
    r = p.norm()
    ph = _phase(p, I_UNIT)
    c, s = math.cosh(r), math.sinh(r)
    a, ad = ladder_a(N), ladder_adag(N)
    L = left_scale_op
    qc = q.conj()
    if which == "a":
        return a * c + L(ph * s, ad) + scalar(q, N)
    if which == "adag":
        return ad * c + L(ph.conj() * s, a) + scalar(qc, N)
    if which == "N":
        sh2 = 0.5 * math.sinh(2 * r)
        return (number_op(N) * (c * c)
                + L(ph * sh2, compose(ad, ad))
                + L(q * c, ad)
                + L(ph.conj() * sh2, compose(a, a))
                + compose(a, ad) * (s * s)
                + L(ph.conj() * q * s, a)
                + L(qc * c, a)
                + L(ph * qc * s, ad)
                + identity(N) * q.norm() ** 2)
    raise ValueError(f"which must be one of {WHICH}, got {which!r}")


def _compare(U: FockOperator, A: FockOperator, rhs: FockOperator, which: str) -> ConjugationResult:
    lhs = conjugate_by(U, A)
    m = safe_dimension(U, _degree(which))
    dev = (lhs - rhs).max_abs(m) if m > 0 else math.inf
    return ConjugationResult(lhs, rhs, dev, m)


def _two_photon_unitary(sp: SlicePair, N: int) -> FockOperator:
    return compose(squeeze(sp.p, N), displacement(sp.q, N))


def _squeezed_coherent_unitary(sp: SlicePair, N: int) -> FockOperator:
    return compose(displacement(sp.q, N), squeeze(sp.p, N))


def two_photon_conjugation(sp: SlicePair, which: str, N: int = 64, U=None) -> ConjugationResult:
    """``D(q)^dag S(p)^dag A S(p) D(q)`` against its closed form.

    ``U`` may carry a precomputed ``S(p) D(q)`` when sweeping ``which``.
    """
    U = _two_photon_unitary(sp, N) if U is None else U
    return _compare(U, _ladder(which, N), two_photon_rhs(sp.p, sp.q, which, N), which)


def squeezed_coherent_conjugation(sp: SlicePair, which: str, N: int = 64, U=None) -> ConjugationResult:
    """``S(p)^dag D(q)^dag A D(q) S(p)`` against its closed form."""
    U = _squeezed_coherent_unitary(sp, N) if U is None else U
    return _compare(U, _ladder(which, N), squeezed_coherent_rhs(sp.p, sp.q, which, N), which)


@dataclass(frozen=True)
class Witness:
    p: Quaternion
    q: Quaternion
    dev: float
    safe_dim: int

    def to_json(self) -> dict:
        return {"p": list(self.p.array), "q": list(self.q.array),
                "dev": self.dev, "safe_dim": self.safe_dim}


def slice_formula_deviation(p, q, which: str = "a", N: int = 64) -> Witness:
    """Deviation of the two-photon closed form for arbitrary p, q (no slice check)."""
    p, q = as_quaternion(p), as_quaternion(q)
    U = compose(squeeze(p, N), displacement(q, N))
    res = _compare(U, _ladder(which, N), two_photon_rhs(p, q, which, N), which)
    return Witness(p, q, res.max_dev, res.safe_dim)


def noncommutativity_witness(N: int = 64) -> Witness:
    """A pair on different slices where the two-photon closed form fails."""
    return slice_formula_deviation(Quaternion(0, 0.4, 0, 0), Quaternion(0, 0, 0.7, 0), "a", N)


DEFAULT_AXES = (
    Quaternion(0, 1, 0, 0),
    Quaternion(0, 0, 1, 0),
    Quaternion(0, 0, 0, 1),
    Quaternion(0, 1 / math.sqrt(3), 1 / math.sqrt(3), 1 / math.sqrt(3)),
)


def verification_table(axes=DEFAULT_AXES, p_abs=(0.2, 0.4, 0.6),
                       theta_p=(0.0, 2 * math.pi / 3, 4 * math.pi / 3),
                       q_abs: float = 0.6, theta_q: float = 0.7, N: int = 64):
    """One row per (family, axis, |p|, theta_p, which) with the measured deviation."""
    rows = []
    families = (("two_photon", two_photon_conjugation, _two_photon_unitary),
                ("squeezed_coherent", squeezed_coherent_conjugation, _squeezed_coherent_unitary))
    for ax in axes:
        for r in p_abs:
            for t in theta_p:
                sp = SlicePair.from_polar(ax, r, t, q_abs, theta_q)
                for fam, fn, unitary in families:
                    U = unitary(sp, N)
                    for which in WHICH:
                        res = fn(sp, which, N, U)
                        rows.append({"family": fam, "axis": list(check_axis(ax).array),
                                     "p_abs": r, "theta_p": t, "which": which,
                                     "max_dev": res.max_dev, "safe_dim": res.safe_dim})
    return rows
