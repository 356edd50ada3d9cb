"""Expectation values, quadratures, photon statistics and uncertainty checks."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import MeanZero, NotCanonicalPair
from .fock import DEFAULT_TRUNCATION, FockVector, inner
from .operators import (FockOperator, commutator, compose, ladder_a, ladder_adag,
                        left_scale_op)
from .quaternion import (I_UNIT, Quaternion, as_quaternion, check_axis, qmul,
                         slice_decompose, to_matrix)
from .states import SqueezeParams, coherent, pure_squeezed

REAL_TOL = 1e-9
CI_TOL = 1e-16


def expectation(phi: FockVector, A: FockOperator) -> Quaternion:
    """``<phi|A|phi>``; warns if phi is not normalized."""
    if abs(phi.norm_squared() - 1.0) > 1e-8:
        warnings.warn(f"state has norm^2 {phi.norm_squared():.6g}, not 1", stacklevel=2)
    return inner(phi, A.apply(phi))


def real_value(q: Quaternion, tol: float = REAL_TOL) -> float:
    """Real part of ``q`` after checking the imaginary part is negligible."""
    if not q.is_real(tol):
        raise ValueError(f"expected a real value, got {q}")
    return q.q0


def _commute(p: Quaternion, q: Quaternion, tol: float = 1e-12) -> bool:
    return (p * q - q * p).norm() <= tol


@dataclass(frozen=True)
class ExpectationReport:
    mean: Quaternion
    second_moment: Quaternion
    variance: Quaternion | None

    def as_matrix(self) -> dict:
        out = {"mean": to_matrix(self.mean), "second_moment": to_matrix(self.second_moment)}
        if self.variance is not None:
            out["variance"] = to_matrix(self.variance)
        return out

    def to_json(self) -> dict:
        def q(x):
            return None if x is None else list(x.array)
        return {"mean": q(self.mean), "second_moment": q(self.second_moment),
                "variance": q(self.variance)}


def report(phi: FockVector, A: FockOperator) -> ExpectationReport:
    """Mean, second moment and, where it is meaningful, the variance of A.

    The variance is only formed when the mean is real or the two moments
    commute; otherwise it is left as None.
    """
    mean = expectation(phi, A)
    second = expectation(phi, compose(A, A))
    if mean.is_real(REAL_TOL) or _commute(mean, second):
        var = second - mean * mean
    else:
        var = None
    return ExpectationReport(mean, second, var)


def variance(phi: FockVector, A: FockOperator) -> float:
    """Real variance of a self-adjoint observable."""
    rep = report(phi, A)
    return real_value(rep.variance)


# -- quadratures ---------------------------------------------------------------------

def quadratures(N: int = DEFAULT_TRUNCATION, axis=I_UNIT):
    """``X = (a + adag)/2`` and ``Y = -(axis/2).(a - adag)``."""
    u = check_axis(axis)
    a, ad = ladder_a(N), ladder_adag(N)
    X = (a + ad) * 0.5
    Y = left_scale_op(-u * 0.5, a - ad)
    return X, Y


def position_momentum(N: int = DEFAULT_TRUNCATION, axis=I_UNIT):
    """``Q = (a + adag)/sqrt 2`` and ``P = -(axis/sqrt 2).(a - adag)``."""
    u = check_axis(axis)
    a, ad = ladder_a(N), ladder_adag(N)
    Q = (a + ad) / math.sqrt(2.0)
    P = left_scale_op(-u / math.sqrt(2.0), a - ad)
    return Q, P


def rotated_quadratures(p, N: int = DEFAULT_TRUNCATION):
    """Quadratures aligned with the squeezing phase of ``p``.

    With ``w = exp(theta u / 2)`` (u the slice axis of p),
    ``U = (conj(w).a + w.adag)/2`` and ``V = -(u/2).(conj(w).a - w.adag)``,
    so that ``U + u.V = conj(w).a``.
    """
    sp = SqueezeParams(p)
    u = slice_decompose(sp.p).axis
    half = sp.polar.theta / 2.0
    w = Quaternion(math.cos(half)) + u * math.sin(half)
    a, ad = ladder_a(N), ladder_adag(N)
    wa = left_scale_op(w.conj(), a)
    wad = left_scale_op(w, ad)
    U = (wa + wad) * 0.5
    V = left_scale_op(-u * 0.5, wa - wad)
    return U, V


def squeeze_variance_product(p, N: int = DEFAULT_TRUNCATION, axis=I_UNIT) -> float:
    """``<dX>^2 <dY>^2`` measured on ``S(p) Phi_0``."""
    eta = pure_squeezed(p, N)
    X, Y = quadratures(N, axis)
    return variance(eta, X) * variance(eta, Y)


def squeeze_variance_product_closed(p) -> float:
    sp = SqueezeParams(p)
    return (1.0 + math.sinh(2 * sp.modulus) ** 2 * math.sin(sp.polar.theta) ** 2) / 16.0


def rotated_quadrature_variances(p, N: int = DEFAULT_TRUNCATION):
    """``(<dU>^2, <dV>^2)`` on ``S(p) Phi_0``."""
    eta = pure_squeezed(p, N)
    U, V = rotated_quadratures(p, N)
    return variance(eta, U), variance(eta, V)


def rotated_quadrature_product(p, N: int = DEFAULT_TRUNCATION) -> float:
    """``<dU><dV>`` on ``S(p) Phi_0``; equals 1/4 for every p."""
    vu, vv = rotated_quadrature_variances(p, N)
    return math.sqrt(vu * vv)


# -- photon statistics ----------------------------------------------------------------

@dataclass(frozen=True)
class PhotonStats:
    mean_n: float
    second_moment_n: float

    @property
    def var_n(self) -> float:
        return self.second_moment_n - self.mean_n ** 2

    @property
    def mandel_q(self) -> float:
        """``<dN>^2 / <N> - 1``; raises MeanZero for a photon-free state."""
        if self.mean_n == 0.0:
            raise MeanZero("Mandel parameter undefined: <N> = 0")
        return self.var_n / self.mean_n - 1.0

    def to_json(self) -> dict:
        try:
            mq = self.mandel_q
        except MeanZero:
            mq = None
        return {"mean_n": self.mean_n, "var_n": self.var_n, "mandel_q": mq}


def state_photon_stats(phi: FockVector) -> PhotonStats:
    """Photon-number moments read from the level populations of ``phi``."""
    pops = (phi.coeffs ** 2).sum(axis=1)
    n = np.arange(phi.N, dtype=float)
    return PhotonStats(float(pops @ n), float(pops @ (n * n)))


def photon_stats(p, N: int = DEFAULT_TRUNCATION) -> PhotonStats:
    return state_photon_stats(pure_squeezed(p, N))


def photon_stats_closed(p) -> dict:
    s2 = math.sinh(SqueezeParams(p).modulus) ** 2
    return {"mean_n": s2, "second_moment_n": 3 * s2 * s2 + 2 * s2,
            "var_n": 2 * s2 * (1 + s2), "mandel_q": 1 + 2 * s2}


# -- the Ci series ----------------------------------------------------------------------

@dataclass(frozen=True)
class CiValue:
    value: Quaternion
    r: float
    axis: Quaternion
    terms_used: int

    def checks(self, tol: float = 1e-12) -> dict:
        v = self.value
        return {"conj_is_negative": (v.conj() + v).norm() <= tol,
                "modulus_at_most_one": self.r <= 1.0 + tol}


def ci_series_batch(qs, axis=I_UNIT, tol: float = CI_TOL):
    """Vectorized Ci for an array of quaternions ``(M, 4)``.

    Returns ``(values, terms_used)``.
    """
    u = check_axis(axis)
    qs = np.ascontiguousarray(qs, dtype=float).reshape(-1, 4)
    conj = qs.copy()
    conj[:, 1:] *= -1.0
    r2 = (qs ** 2).sum(axis=1)
    X = np.broadcast_to(u.array, qs.shape)
    sums, terms = _backend.impl.sandwich_series(conj, X, qs, -r2, tol, 100_000)
    return sums * np.exp(-r2)[:, None], terms


def ci_series(q, axis=I_UNIT, tol: float = CI_TOL) -> CiValue:
    """``exp(-|q|^2) sum_n conj(q)^n axis q^n / n!`` summed to its term bound."""
    q = as_quaternion(q)
    vals, terms = ci_series_batch(q.array[None], axis, tol)
    v = Quaternion.from_array(vals[0])
    r = v.norm()
    ax = slice_decompose(v).axis if r > 0 else check_axis(axis)
    return CiValue(v, r, ax, int(terms[0]))


@dataclass(frozen=True)
class HeisenbergReport:
    var_q: float
    var_p: float
    product: float
    bound_gap: float
    commutator_half: float
    product_from_ci: float
    ci: CiValue

    @property
    def inequality_holds(self) -> bool:
        return self.bound_gap >= -1e-12

    def to_json(self) -> dict:
        return {"var_q": self.var_q, "var_p": self.var_p, "product": self.product,
                "bound_gap": self.bound_gap, "commutator_half": self.commutator_half,
                "product_from_ci": self.product_from_ci,
                "ci": list(self.ci.value.array)}


def heisenberg_bounds(q, N: int = DEFAULT_TRUNCATION, axis=I_UNIT) -> HeisenbergReport:
    """Position/momentum variances on the coherent state of ``q``.

    ``bound_gap = |q|^2 - |<dQ>^2 <dP>^2 - 1/4|``; non-negative when the
    uncertainty estimate holds.  The product is also rebuilt from the Ci
    series, ``<P> = -sqrt(2) Re(Ci q)``, as an independent cross-check.
    """
    q = as_quaternion(q)
    eta = coherent(q, N).vector
    Qop, Pop = position_momentum(N, axis)
    vq = variance(eta, Qop)
    vp = variance(eta, Pop)
    product = vq * vp
    ci = ci_series(q, axis)
    # second moment of P depends only on q; first moment needs Ci
    v2 = float(q.vector @ q.vector)
    mean_p = -math.sqrt(2.0) * qmul(ci.value, q).q0
    vp_ci = 0.5 + 2.0 * v2 - mean_p ** 2
    comm = commutator(Qop, Pop)
    comm_mean = expectation(eta, comm)
    return HeisenbergReport(
        var_q=vq, var_p=vp, product=product,
        bound_gap=q.norm() ** 2 - abs(product - 0.25),
        commutator_half=0.5 * comm_mean.norm(),
        product_from_ci=0.5 * vp_ci, ci=ci)


# -- squeezing criterion -------------------------------------------------------------------

@dataclass(frozen=True)
class SqueezingVerdict:
    var_a: float
    var_b: float
    half_commutator: float
    axis: Quaternion
    squeezed: bool
    ideally_squeezed: bool


def canonical_form(A: FockOperator, B: FockOperator, safe: int, tol: float = 1e-9):
    """Write ``[A, B] = axis.C`` with C self-adjoint on the leading ``safe`` levels."""
    K = commutator(A, B)
    blk = K.block(safe)
    mags = np.sqrt((blk ** 2).sum(-1))
    if mags.size == 0 or mags.max() == 0:
        raise NotCanonicalPair("commutator vanishes on the safe subspace")
    idx = np.unravel_index(np.argmax(mags), mags.shape)
    lead = Quaternion.from_array(blk[idx])
    if lead.vector @ lead.vector == 0:
        raise NotCanonicalPair("commutator has a real leading entry")
    u = slice_decompose(lead).axis
    C = left_scale_op(-u, K)
    cb = C.block(safe)
    herm = cb - np.swapaxes(cb, 0, 1) * np.array([1, -1, -1, -1])
    if np.abs(herm).max() > tol * max(1.0, mags.max()):
        raise NotCanonicalPair("commutator is not an imaginary unit times a self-adjoint operator")
    return u, C


def is_squeezed(phi: FockVector, A: FockOperator, B: FockOperator, tol: float = 1e-9,
                safe: int | None = None) -> SqueezingVerdict:
    """Squeezing test for the pair (A, B) with ``[A, B] = axis.C``."""
    if safe is None:
        safe = A.N - 2
    u, C = canonical_form(A, B, safe)
    half_c = 0.5 * expectation(phi, C).norm()
    va, vb = variance(phi, A), variance(phi, B)
    squeezed = va < half_c - tol or vb < half_c - tol
    ideal = squeezed and abs(math.sqrt(va * vb) - half_c) <= tol
    return SqueezingVerdict(va, vb, half_c, u, squeezed, ideal)

