"""Product quadrature over quaternions in 4D polar coordinates.

A point is ``q = r exp(theta u)`` with the unit imaginary
``u = (sin phi cos psi, sin phi sin psi, cos phi)``.  Three measure variants
are available:

``gaussian_weighted``
    ``r exp(-r^2) sin(phi) / (4 pi^2)``; orthonormalizes the monomials.
``plain``
    ``r sin(phi) / (4 pi^2)``; pairs with normalized coherent states.
``printed``
    ``exp(-r^2) sin(phi) / (4 pi)`` with no radial Jacobian.  Kept only to
    show that it does not normalize the monomials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import BadGrid
from .operators import FockOperator, conjugate_by, identity
from .states import squeeze

VARIANTS = ("gaussian_weighted", "plain", "printed")
RADIAL_CUTOFF = 9.0
STATED_GRID = (48, 16, 12, 16)


@dataclass(frozen=True)
class QuadratureGrid:
    n_r: int = 48
    n_theta: int = 16
    n_phi: int = 12
    n_psi: int = 16
    variant: str = "gaussian_weighted"
    R: float = RADIAL_CUTOFF
    points: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("n_r", "n_theta", "n_phi", "n_psi"):
            if int(getattr(self, name)) < 1:
                raise BadGrid(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.variant not in VARIANTS:
            raise BadGrid(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if not self.R > 0:
            raise BadGrid("radial cutoff must be positive")
        pts, w = _build(self)
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.n_r * self.n_theta * self.n_phi * self.n_psi

    def total_weight(self) -> float:
        return math.fsum(self.weights)

    def with_n_r(self, n_r: int) -> "QuadratureGrid":
        return QuadratureGrid(n_r, self.n_theta, self.n_phi, self.n_psi, self.variant, self.R)

    def with_variant(self, variant: str) -> "QuadratureGrid":
        return QuadratureGrid(self.n_r, self.n_theta, self.n_phi, self.n_psi, variant, self.R)

    def describe(self) -> dict:
        return {"n_r": self.n_r, "n_theta": self.n_theta, "n_phi": self.n_phi,
                "n_psi": self.n_psi, "variant": self.variant, "R": self.R}


def _gauss_legendre(n: int, a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def _build(g: QuadratureGrid):
    r, wr = _gauss_legendre(g.n_r, 0.0, g.R)
    th = 2 * np.pi * np.arange(g.n_theta) / g.n_theta
    wth = np.full(g.n_theta, 2 * np.pi / g.n_theta)
    ph, wph = _gauss_legendre(g.n_phi, 0.0, np.pi)
    ps = 2 * np.pi * np.arange(g.n_psi) / g.n_psi
    wps = np.full(g.n_psi, 2 * np.pi / g.n_psi)

    if g.variant == "gaussian_weighted":
        radial = r * np.exp(-r * r) * wr
        const = 1.0 / (4 * np.pi ** 2)
    elif g.variant == "plain":
        radial = r * wr
        const = 1.0 / (4 * np.pi ** 2)
    else:
        radial = np.exp(-r * r) * wr
        const = 1.0 / (4 * np.pi)

    R_, TH, PH, PS = np.meshgrid(r, th, ph, ps, indexing="ij")
    W = (const * radial[:, None, None, None] * wth[None, :, None, None]
         * (np.sin(ph) * wph)[None, None, :, None] * wps[None, None, None, :])
    s = np.sin(TH)
    pts = np.stack([R_ * np.cos(TH),
                    R_ * s * np.sin(PH) * np.cos(PS),
                    R_ * s * np.sin(PH) * np.sin(PS),
                    R_ * s * np.cos(PH)], axis=-1)
    return pts.reshape(-1, 4), W.reshape(-1)


def _conj(V):
    out = np.array(V, dtype=float)
    out[..., 1:] *= -1.0
    return out


def gram_matrix(nmax: int, grid: QuadratureGrid) -> np.ndarray:
    """``G_mn = sum_p w_p conj(Phi_m(q_p)) Phi_n(q_p)`` for ``m, n <= nmax``."""
    kern = _backend.impl
    V = kern.monomials(grid.points, nmax + 1)
    # accumulate_outer gives sum w v_m conj(v_n); feed it conj(V)
    return kern.accumulate_outer(_conj(V), grid.weights)


def gram_deviation(G: np.ndarray) -> float:
    D = np.array(G)
    D[..., 0] -= np.eye(D.shape[0])
    return float(np.sqrt((D ** 2).sum(-1)).max())


def coherent_samples(grid: QuadratureGrid, N: int) -> np.ndarray:
    """Closed-form coherent coefficients at every grid point, shape ``(P, N, 4)``."""
    V = _backend.impl.monomials(grid.points, N)
    r2 = (grid.points ** 2).sum(-1)
    return V * np.exp(-0.5 * r2)[:, None, None]


def accumulate_resolution(grid: QuadratureGrid, N: int) -> FockOperator:
    """``sum_p w_p |eta_p><eta_p|`` on the first N levels."""
    V = coherent_samples(grid, N)
    return FockOperator(_backend.impl.accumulate_outer(V, grid.weights))


@dataclass(frozen=True)
class ResolutionResult:
    operator: FockOperator
    block: np.ndarray
    entry_dev: np.ndarray
    max_dev: float
    diag_dev: float
    offdiag_dev: float
    grid: QuadratureGrid

    def to_json(self) -> dict:
        return {"grid": self.grid.describe(), "nmax": int(self.block.shape[0]) - 1,
                "N": self.operator.N, "entry_dev": self.entry_dev.tolist(),
                "diag_dev": self.diag_dev, "offdiag_dev": self.offdiag_dev,
                "max_dev": self.max_dev}


def resolution_of_identity(nmax: int, grid: QuadratureGrid, N: int = 16) -> ResolutionResult:
    """Accumulate the coherent-state projectors and compare the leading block to I."""
    if nmax + 1 > N:
        raise BadGrid(f"nmax={nmax} needs N >= {nmax + 1}")
    op = accumulate_resolution(grid, N)
    blk = op.block(nmax + 1)
    D = np.array(blk)
    D[..., 0] -= np.eye(nmax + 1)
    dev = np.sqrt((D ** 2).sum(-1))
    diag = float(np.diag(dev).max())
    off = float((dev - np.diag(np.diag(dev))).max()) if nmax > 0 else 0.0
    return ResolutionResult(op, blk, dev, float(dev.max()), diag, off, grid)


def convergence_ratio(nmax: int, grid: QuadratureGrid, N: int = 16) -> tuple[float, float, float]:
    """Diagonal deviation at ``n_r`` and ``2 n_r`` and their ratio."""
    a = resolution_of_identity(nmax, grid, N).diag_dev
    b = resolution_of_identity(nmax, grid.with_n_r(2 * grid.n_r), N).diag_dev
    return a, b, (a / b if b > 0 else math.inf)


@dataclass(frozen=True)
class SqueezedResolution:
    dev_before: float
    dev_after: float

    @property
    def relative_change(self) -> float:
        if self.dev_before == 0.0:
            return abs(self.dev_after)
        return abs(self.dev_after - self.dev_before) / self.dev_before

    def to_json(self) -> dict:
        return {"dev_before": self.dev_before, "dev_after": self.dev_after,
                "relative_change": self.relative_change}


def squeezed_resolution(p, grid: QuadratureGrid, N: int = 16) -> SqueezedResolution:
    """Frobenius deviation from I of the accumulated resolution, before and
    after conjugation by the truncated (exactly unitary) ``S(p)``."""
    R = accumulate_resolution(grid, N)
    S = squeeze(p, N)
    one = identity(N)
    before = (R - one).frobenius()
    after = (conjugate_by(S.dag, R) - one).frobenius()
    return SqueezedResolution(before, after)


def is_self_adjoint_defect(op: FockOperator) -> float:
    return (op - op.dag).max_abs()


def measure_adjudication(nmax: int = 8, n_r: int = 40, n_ang: tuple = (16, 12, 16)) -> dict:
    """Gram deviations of the printed measure and of the r-weighted Gaussian measure."""
    out = {}
    for variant in ("printed", "gaussian_weighted"):
        G = gram_matrix(nmax, QuadratureGrid(n_r, *n_ang, variant=variant))
        out[variant] = {"gram_dev": gram_deviation(G), "G00": float(G[0, 0, 0]),
                        "G11_over_G00": float(G[1, 1, 0] / G[0, 0, 0])}
    return out
