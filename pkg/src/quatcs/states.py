"""State families: coherent, displaced, squeezed and one-mode fermionic."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammainc

from .errors import TruncationTooSmall
from .fock import DEFAULT_TRUNCATION, FockVector, basis_vector, vacuum
from .operators import (FockOperator, compose, expm, identity, ladder_a, ladder_adag,
                        left_scale_op, number_op)
from .quaternion import PolarForm, Quaternion, as_quaternion, polar, qmul_arr

TAIL_TOL = 1e-12


def coherent_coefficients(q, N: int) -> np.ndarray:
    """``exp(-|q|^2/2) q^n / sqrt(n!)`` for ``n < N`` with no tail check."""
    q = as_quaternion(q)
    out = np.empty((N, 4))
    cur = np.array([math.exp(-0.5 * q.norm() ** 2), 0.0, 0.0, 0.0])
    qa = q.array
    for n in range(N):
        out[n] = cur
        cur = qmul_arr(cur, qa) / math.sqrt(n + 1)
    return out


def coherent_tail_mass(q, N: int) -> float:
    """Probability mass of levels >= N, i.e. P(Poisson(|q|^2) >= N)."""
    x = as_quaternion(q).norm() ** 2
    if x == 0.0:
        return 0.0
    return float(gammainc(N, x))


@dataclass(frozen=True)
class CoherentState:
    label: Quaternion
    vector: FockVector

    @property
    def N(self) -> int:
        return self.vector.N


def coherent(q, N: int = DEFAULT_TRUNCATION, tail_tol: float = TAIL_TOL) -> CoherentState:
    """Normalized canonical coherent state built from its closed form."""
    q = as_quaternion(q)
    tail = coherent_tail_mass(q, N)
    if tail > tail_tol:
        raise TruncationTooSmall(
            f"coherent state |q|={q.norm():.4g} drops tail mass {tail:.3e} at N={N}")
    return CoherentState(q, FockVector(coherent_coefficients(q, N)))


def displacement_generator(q, N: int) -> FockOperator:
    q = as_quaternion(q)
    return left_scale_op(q, ladder_adag(N)) - left_scale_op(q.conj(), ladder_a(N))


def displacement(q, N: int = DEFAULT_TRUNCATION) -> FockOperator:
    """``D(q) = exp(q.adag - conj(q).a)``."""
    return expm(displacement_generator(q, N))


@dataclass(frozen=True)
class SqueezeParams:
    p: Quaternion
    polar: PolarForm = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "p", as_quaternion(self.p))
        object.__setattr__(self, "polar", polar(self.p))

    @property
    def modulus(self) -> float:
        return self.polar.r

    @property
    def phase(self) -> Quaternion:
        """``exp(i theta sigma_n)``, i.e. ``p/|p|`` (1 when p = 0)."""
        return self.polar.phase()


def squeeze_generator(p, N: int) -> FockOperator:
    """``(p.adag^2 - conj(p).a^2) / 2``."""
    p = as_quaternion(p)
    a, ad = ladder_a(N), ladder_adag(N)
    return (left_scale_op(p, compose(ad, ad)) - left_scale_op(p.conj(), compose(a, a))) * 0.5


def su11_generators(N: int):
    """``(K_plus, K_minus, K_zero)`` = ``(adag^2/2, a^2/2, (adag a + 1/2)/2)``."""
    if N < 4:
        raise ValueError("su(1,1) generators need N >= 4")
    a, ad = ladder_a(N), ladder_adag(N)
    kp = compose(ad, ad) * 0.5
    km = compose(a, a) * 0.5
    k0 = (number_op(N) + identity(N) * 0.5) * 0.5
    return kp, km, k0


def squeeze(p, N: int = DEFAULT_TRUNCATION) -> FockOperator:
    """``S(p) = exp((p.adag^2 - conj(p).a^2)/2)``."""
    return expm(squeeze_generator(p, N))


def squeeze_su11(p, N: int = DEFAULT_TRUNCATION) -> FockOperator:
    """The same operator written as ``exp(p.K_plus - conj(p).K_minus)``."""
    p = as_quaternion(p)
    kp, km, _ = su11_generators(N)
    return expm(left_scale_op(p, kp) - left_scale_op(p.conj(), km))


def pure_squeezed(p, N: int = DEFAULT_TRUNCATION) -> FockVector:
    """``S(p) Phi_0``, computed by exponentiation."""
    return squeeze(p, N).apply(vacuum(N))


def squeezed_vacuum_closed_form(p, N: int) -> np.ndarray:
    """Coefficients ``(p/|p| tanh|p|)^n sqrt((2n)!) / (2^n n!) / sqrt(cosh|p|)``
    on even levels; the single-mode squeezed vacuum written in the slice of p."""
    sp = SqueezeParams(p)
    r = sp.modulus
    z = sp.phase.array * math.tanh(r)
    out = np.zeros((N, 4))
    cur = np.array([1.0 / math.sqrt(math.cosh(r)), 0.0, 0.0, 0.0])
    for n in range(0, (N + 1) // 2):
        out[2 * n] = cur
        # ratio of sqrt((2n+2)!)/(2^(n+1)(n+1)!) to sqrt((2n)!)/(2^n n!)
        ratio = math.sqrt((2 * n + 1) * (2 * n + 2)) / (2 * (n + 1))
        cur = qmul_arr(cur, z) * ratio
    return out


def growing_squeezed_series(p, N: int) -> np.ndarray:
    """Coefficients ``exp(|p|^2/4) exp(n|p|^2) p^n sqrt((2n)!)/(2^n n!)`` on
    level 2n.  This series is not normalizable; it is kept only so reports
    can show how it departs from ``S(p) Phi_0``."""
    p = as_quaternion(p)
    r2 = p.norm() ** 2
    out = np.zeros((N, 4))
    cur = np.array([math.exp(0.25 * r2), 0.0, 0.0, 0.0])
    for n in range(0, (N + 1) // 2):
        out[2 * n] = cur
        ratio = math.sqrt((2 * n + 1) * (2 * n + 2)) / (2 * (n + 1))
        cur = qmul_arr(cur, p.array) * (ratio * math.exp(r2))
    return out


def squeezed_SD(q, p, N: int = DEFAULT_TRUNCATION) -> FockVector:
    """``S(p) D(q) Phi_0``, with ``D(q) Phi_0`` taken from the closed form."""
    return squeeze(p, N).apply(coherent(q, N).vector)


def squeezed_DS(q, p, N: int = DEFAULT_TRUNCATION) -> FockVector:
    """``D(q) S(p) Phi_0``."""
    return displacement(q, N).apply(squeeze(p, N).apply(vacuum(N)))


# -- fermionic one-mode states -------------------------------------------------------

@dataclass(frozen=True)
class FermionicPair:
    eta0: FockVector
    eta1: FockVector


def _sinc(x: float) -> float:
    if abs(x) < 1e-4:
        return 1.0 - x * x / 6.0 + x ** 4 / 120.0
    return math.sin(x) / x


def fermionic_generator(q) -> FockOperator:
    return displacement_generator(q, 2)


def fermionic(q) -> FermionicPair:
    """Closed form of ``exp(q.adag - conj(q).a)`` on ``|0>`` and ``|1>``."""
    q = as_quaternion(q)
    r = q.norm()
    c = math.cos(r)
    s = _sinc(r)
    e0 = np.zeros((2, 4))
    e1 = np.zeros((2, 4))
    e0[0, 0] = c
    e0[1] = q.array * s
    e1[1, 0] = c
    e1[0] = -q.conj().array * s
    return FermionicPair(FockVector(e0), FockVector(e1))


def fermionic_closed_operator(q) -> FockOperator:
    """``cos|q| I + (q/|q|) sin|q|.adag - (conj(q)/|q|) sin|q|.a`` on two levels."""
    pair = fermionic(q)
    e = np.stack([pair.eta0.coeffs, pair.eta1.coeffs], axis=1)
    return FockOperator(e)


def fermionic_expm(q) -> FockOperator:
    return expm(fermionic_generator(q))


def fock_state(n: int, N: int = DEFAULT_TRUNCATION) -> FockVector:
    return basis_vector(n, N)


def printed_series_report(p, N: int = DEFAULT_TRUNCATION, levels: int = 8) -> dict:
    """Compare the growing printed series with ``S(p) Phi_0`` level by level."""
    grow = growing_squeezed_series(p, N)
    state = pure_squeezed(p, N).coeffs
    idx = list(range(0, min(2 * levels, N), 2))
    g = np.sqrt((grow[idx] ** 2).sum(-1))
    s = np.sqrt((state[idx] ** 2).sum(-1))
    return {"levels": idx, "printed_abs": g.tolist(), "expm_abs": s.tolist(),
            "printed_norm_squared": float((grow ** 2).sum()),
            "ratio_to_expm": (g / s).tolist(),
            "printed_increasing": bool(np.all(np.diff(g) > 0)),
            "max_distance": float(np.sqrt(((grow - state) ** 2).sum(-1)).max())}
