"""Named identity suite behind ``quatcs verify``.

Each check returns a non-negative deviation; it passes when the deviation
is at most the run tolerance.  Truncation-sensitive checks measure on the
leading levels that the truncated exponentials resolve; when no level is
resolved the deviation is ``inf``, so an undersized N fails loudly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import bargmann_kernel, inner, left_scale, random_vector, right_scale, vacuum
from .observables import (ci_series, ci_series_batch, expectation, heisenberg_bounds,
                          photon_stats, photon_stats_closed, position_momentum,
                          rotated_quadrature_variances, squeeze_variance_product,
                          squeeze_variance_product_closed, variance)
from .operators import (FockOperator, adjoint, anticommutator, commutator, compose,
                        conjugate_by, hamiltonian, identity, ladder_a, ladder_adag,
                        ladder_safe_dimension, left_scale_op, number_op, right_scale_op,
                        safe_dimension, unitarity_defect)
from .quadrature import QuadratureGrid, gram_deviation, gram_matrix
from .quaternion import (I_UNIT, Quaternion, polar, qexp, qmul_arr, qabs_arr, reconstruct,
                         star_exp, to_matrix_arr)
from .slices import (SlicePair, squeezed_coherent_conjugation, squeezed_coherent_rhs,
                     two_photon_conjugation, two_photon_rhs)
from .states import (coherent, coherent_coefficients, displacement, fermionic,
                     fermionic_expm, fermionic_generator, pure_squeezed, squeeze,
                     squeeze_su11, squeezed_DS, squeezed_SD, squeezed_vacuum_closed_form)

DEFAULT_TOL = 1e-7
N_SAMPLES = 200


@dataclass
class Context:
    N: int
    rng: np.random.Generator

    def quats(self, n: int, scale: float = 1.0) -> np.ndarray:
        return scale * self.rng.standard_normal((n, 4))

    def quat(self, modulus: float) -> Quaternion:
        v = self.rng.standard_normal(4)
        return Quaternion.from_array(modulus * v / np.linalg.norm(v))


def _qdev(a, b) -> float:
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return float(np.sqrt((d ** 2).sum(-1)).max()) if d.size else 0.0


def _conj_check(U: FockOperator, A: FockOperator, rhs: FockOperator, degree: int) -> float:
    m = safe_dimension(U, degree)
    if m == 0:
        return math.inf
    return (conjugate_by(U, A) - rhs).max_abs(m)


def _ladder_check(lhs: FockOperator, rhs: FockOperator, degree: int) -> float:
    m = ladder_safe_dimension(lhs.N, degree)
    if m == 0:
        return math.inf
    return (lhs - rhs).max_abs(m)


# -- quaternion algebra -----------------------------------------------------------------

def _norm_multiplicative(ctx):
    p, q = ctx.quats(N_SAMPLES), ctx.quats(N_SAMPLES)
    return float(np.abs(qabs_arr(qmul_arr(p, q)) - qabs_arr(p) * qabs_arr(q)).max())


def _matrix_homomorphism(ctx):
    p, q = ctx.quats(N_SAMPLES), ctx.quats(N_SAMPLES)
    return float(np.abs(to_matrix_arr(qmul_arr(p, q)) - to_matrix_arr(p) @ to_matrix_arr(q)).max())


def _polar_reconstruct(ctx):
    qs = ctx.quats(N_SAMPLES)
    return max((reconstruct(polar(Quaternion.from_array(q))) - Quaternion.from_array(q)).norm()
               for q in qs)


def _star_exp_slice(ctx):
    u = ctx.quat(1.0)
    u = Quaternion(0, *u.vector) / np.linalg.norm(u.vector)
    p = Quaternion(0.3) + u * 0.8
    q = Quaternion(-0.5) + u * 0.4
    return (star_exp(p, q) - qexp(p * q)).norm()


# -- Fock space -----------------------------------------------------------------------------

def _inner_axioms(ctx):
    f, g = random_vector(ctx.rng, 12), random_vector(ctx.rng, 12)
    q = ctx.quat(1.3)
    a = (inner(right_scale(f, q), g) - q.conj() * inner(f, g)).norm()
    b = (inner(f, right_scale(g, q)) - inner(f, g) * q).norm()
    c = (inner(f, g).conj() - inner(g, f)).norm()
    return max(a, b, c)


def _left_scale_laws(ctx):
    phi, psi = random_vector(ctx.rng, 12), random_vector(ctx.rng, 12)
    p, q = ctx.quat(0.7), ctx.quat(1.9)
    b = abs(left_scale(q, phi).norm() - q.norm() * phi.norm())
    c = left_scale(q, left_scale(p, phi)).distance(left_scale(q * p, phi))
    d = (inner(left_scale(q.conj(), phi), psi) - inner(phi, left_scale(q, psi))).norm()
    add = left_scale(p + q, phi).distance(left_scale(p, phi) + left_scale(q, phi))
    return max(b, c, d, add)


def _bargmann_kernel(ctx):
    q = ctx.quat(1.7)
    return abs(bargmann_kernel(q, q, 60).q0 - math.exp(q.norm() ** 2)) / math.exp(q.norm() ** 2)


# -- operators ---------------------------------------------------------------------------------

def _canonical_commutator(ctx):
    a, ad = ladder_a(ctx.N), ladder_adag(ctx.N)
    return _ladder_check(commutator(a, ad), identity(ctx.N), 2)


def _adjoint_of_creation(ctx):
    return (adjoint(ladder_adag(ctx.N)) - ladder_a(ctx.N)).max_abs()


def _scalar_commutes_with_ladder(ctx):
    q = ctx.quat(1.0)
    a, ad = ladder_a(ctx.N), ladder_adag(ctx.N)
    return max((left_scale_op(q, a) - right_scale_op(a, q)).max_abs(),
               (left_scale_op(q, ad) - right_scale_op(ad, q)).max_abs())


def _scaling_adjoint(ctx):
    q = ctx.quat(1.1)
    A = FockOperator(ctx.rng.standard_normal((6, 6, 4)))
    left = (adjoint(left_scale_op(q, A)) - right_scale_op(adjoint(A), q.conj())).max_abs()
    right = (adjoint(right_scale_op(A, q)) - left_scale_op(q.conj(), adjoint(A))).max_abs()
    return max(left, right)


def _hamiltonian(ctx):
    Q, P = position_momentum(ctx.N)
    lhs = (compose(Q, Q) + compose(P, P)) * 0.5
    return _ladder_check(lhs, hamiltonian(ctx.N), 2)


def _su11(ctx):
    from .states import su11_generators
    kp, km, k0 = su11_generators(ctx.N)
    return max(_ladder_check(commutator(k0, kp), kp, 4),
               _ladder_check(commutator(k0, km), -km, 4),
               _ladder_check(commutator(kp, km), k0 * -2.0, 4))


# -- displacement and coherent states ---------------------------------------------------------

Q_COH = 1.5


def _coh_q(ctx):
    return Quaternion(0.4, 0.9, -0.6, 0.8) * (Q_COH / math.sqrt(0.16 + 0.81 + 0.36 + 0.64))


def _displacement_unitary(ctx):
    return unitarity_defect(displacement(_coh_q(ctx), ctx.N))


def _displacement_conj(which):
    def check(ctx):
        q = _coh_q(ctx)
        D = displacement(q, ctx.N)
        A = ladder_a(ctx.N) if which == "a" else ladder_adag(ctx.N)
        rhs = squeezed_coherent_rhs(Quaternion(0.0), q, which, ctx.N)
        return _conj_check(D, A, rhs, 2)
    return check


def _coherent_from_displacement(ctx):
    q = _coh_q(ctx)
    phi = displacement(q, ctx.N).apply(vacuum(ctx.N))
    return _qdev(phi.coeffs, coherent_coefficients(q, ctx.N))


def _coherent_eigen(ctx):
    q = _coh_q(ctx)
    eta = displacement(q, ctx.N).apply(vacuum(ctx.N))
    m = ctx.N - 4
    lhs = ladder_a(ctx.N).apply(eta).coeffs[:m]
    return _qdev(lhs, left_scale(q, eta).coeffs[:m])


def _coherent_table(ctx):
    q = _coh_q(ctx)
    eta = coherent(q, ctx.N).vector
    a, ad = ladder_a(ctx.N), ladder_adag(ctx.N)
    qc, q2 = q.conj(), q.norm() ** 2
    pairs = [(a, q), (ad, qc), (compose(a, a), q * q), (compose(ad, ad), qc * qc),
             (compose(a, ad), Quaternion(1 + q2)), (compose(ad, a), Quaternion(q2))]
    return max((expectation(eta, A) - v).norm() for A, v in pairs)


def _position_variance(ctx):
    Q, _ = position_momentum(ctx.N)
    return abs(variance(coherent(_coh_q(ctx), ctx.N).vector, Q) - 0.5)


def _uncertainty_estimate(ctx):
    worst = 0.0
    for axis in (Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)):
        for r in (0.3, 0.8, 1.4):
            q = Quaternion(0.2, 0.5, 0.7, -0.4) * (r / math.sqrt(0.04 + 0.25 + 0.49 + 0.16))
            rep = heisenberg_bounds(q, ctx.N, axis)
            worst = max(worst, -rep.bound_gap, abs(rep.product_from_ci - rep.var_q * rep.var_p))
    return max(worst, 0.0)


def _ci_conjugate_negative(ctx):
    qs = ctx.quats(N_SAMPLES)
    qs *= (3.0 * ctx.rng.random(N_SAMPLES) / np.linalg.norm(qs, axis=1))[:, None]
    vals, _ = ci_series_batch(qs)
    conj_dev = float(np.abs(vals[:, 0]).max())
    over = float(np.maximum(qabs_arr(vals) - 1.0, 0.0).max())
    return max(conj_dev, over)


def _ci_slice_collapse(ctx):
    return max((ci_series(Quaternion(x, y)).value - I_UNIT).norm()
               for x, y in ((2.0, 1.0), (-0.7, 2.2), (1.5, 0.0)))


def _ci_at_j(ctx):
    return (ci_series(Quaternion(0, 0, 1, 0)).value - I_UNIT * math.exp(-2.0)).norm()


# -- squeezing -----------------------------------------------------------------------------------

P_SQ = 0.5


def _sq_p(ctx):
    return Quaternion(0.3, -0.5, 0.2, 0.6) * (P_SQ / math.sqrt(0.09 + 0.25 + 0.04 + 0.36))


def _squeeze_unitary(ctx):
    return unitarity_defect(squeeze(_sq_p(ctx), ctx.N))


def _squeeze_adjoint(ctx):
    p = _sq_p(ctx)
    return (adjoint(squeeze(p, ctx.N)) - squeeze(-p, ctx.N)).max_abs()


def _squeeze_conj(which):
    def check(ctx):
        p = _sq_p(ctx)
        S = squeeze(p, ctx.N)
        a, ad = ladder_a(ctx.N), ladder_adag(ctx.N)
        A = {"a": a, "adag": ad, "N": compose(ad, a)}[which]
        rhs = two_photon_rhs(p, Quaternion(0.0), which, ctx.N)
        return _conj_check(S, A, rhs, 2 if which != "N" else 4)
    return check


def _squeeze_su11(ctx):
    p = _sq_p(ctx)
    return (squeeze(p, ctx.N) - squeeze_su11(p, ctx.N)).max_abs()


def _squeeze_antihermitian(ctx):
    p = _sq_p(ctx)
    a, ad = ladder_a(ctx.N), ladder_adag(ctx.N)
    G = left_scale_op(p, compose(ad, ad)) - left_scale_op(p.conj(), compose(a, a))
    return (adjoint(G) + G).max_abs()


def _pure_squeezed_closed(ctx):
    p = _sq_p(ctx)
    m = safe_dimension(squeeze(p, ctx.N), 0)
    if m == 0:
        return math.inf
    return _qdev(pure_squeezed(p, ctx.N).coeffs[:m], squeezed_vacuum_closed_form(p, ctx.N)[:m])


def _pure_squeezed_table(ctx):
    p = _sq_p(ctx)
    r = p.norm()
    ph = p / r
    c, s = math.cosh(r), math.sinh(r)
    eta = pure_squeezed(p, ctx.N)
    a, ad = ladder_a(ctx.N), ladder_adag(ctx.N)
    pairs = [(a, Quaternion(0.0)), (compose(a, ad), Quaternion(c * c)),
             (compose(ad, a), Quaternion(s * s)), (compose(a, a), ph * (c * s)),
             (compose(ad, ad), ph.conj() * (c * s))]
    return max((expectation(eta, A) - v).norm() for A, v in pairs)


def _variance_product(ctx):
    worst = 0.0
    for p in (_sq_p(ctx), Quaternion(0, 0.5, 0, 0), Quaternion(0.5, 0, 0, 0)):
        worst = max(worst, abs(squeeze_variance_product(p, ctx.N) - squeeze_variance_product_closed(p)))
    return worst


def _rotated_product(ctx):
    p = _sq_p(ctx)
    vu, vv = rotated_quadrature_variances(p, ctx.N)
    r = p.norm()
    exact_u = 0.25 * math.exp(2 * r)
    exact_v = 0.25 * math.exp(-2 * r)
    return max(abs(math.sqrt(vu * vv) - 0.25), abs(vu - exact_u), abs(vv - exact_v))


def _photon_stats(ctx):
    p = _sq_p(ctx)
    st = photon_stats(p, ctx.N)
    cl = photon_stats_closed(p)
    return max(abs(st.mean_n - cl["mean_n"]), abs(st.second_moment_n - cl["second_moment_n"]),
               abs(st.var_n - cl["var_n"]), abs(st.mandel_q - cl["mandel_q"]),
               abs(st.mandel_q - (1 + 2 * st.mean_n)))


def _squeezed_normalized(ctx):
    p, q = _sq_p(ctx), _coh_q(ctx) * (1.0 / Q_COH)
    return max(abs(squeezed_SD(q, p, ctx.N).norm() - 1.0),
               abs(squeezed_DS(q, p, ctx.N).norm() - 1.0))


# -- slice identities --------------------------------------------------------------------------------

def _slice_family(fn):
    def check(ctx):
        worst = 0.0
        for axis in (Quaternion(0, 1, 0, 0), Quaternion(0, 0, 1, 0), Quaternion(0, 0, 0, 1)):
            sp = SlicePair.from_polar(axis, 0.4, 2.0, 0.6, 0.7)
            for which in ("a", "adag", "N"):
                worst = max(worst, fn(sp, which, ctx.N).max_dev)
        return worst
    return check


# -- fermionic -----------------------------------------------------------------------------------

def _fermionic_closed(ctx):
    worst = 0.0
    for q in ctx.quats(50, 2.0):
        q = Quaternion.from_array(q)
        pair = fermionic(q)
        E = fermionic_expm(q).entries
        worst = max(worst, _qdev(E[:, 0], pair.eta0.coeffs), _qdev(E[:, 1], pair.eta1.coeffs))
    return worst


def _fermionic_anticommutator(ctx):
    a, ad = ladder_a(2), ladder_adag(2)
    return (anticommutator(a, ad) - identity(2)).max_abs()


def _fermionic_usual(ctx):
    a, ad = ladder_a(2), ladder_adag(2)
    n = number_op(2) - identity(2) * 0.5
    return max((commutator(n, a) + a).max_abs(), (commutator(n, ad) - ad).max_abs())


def _fermionic_orthonormal(ctx):
    pair = fermionic(ctx.quat(2.3))
    return max(abs(inner(pair.eta0, pair.eta0).q0 - 1), abs(inner(pair.eta1, pair.eta1).q0 - 1),
               inner(pair.eta0, pair.eta1).norm())


def _fermionic_square(ctx):
    q = ctx.quat(1.7)
    G = fermionic_generator(q)
    return (compose(G, G) + identity(2) * q.norm() ** 2).max_abs()


# -- quadrature ----------------------------------------------------------------------------------------

def _gram(ctx):
    return gram_deviation(gram_matrix(8, QuadratureGrid(40, 16, 12, 16, "gaussian_weighted")))


CHECKS = [
    ("quat.norm_multiplicative", "|pq| = |p||q|", _norm_multiplicative),
    ("quat.matrix_homomorphism", "2x2 complex image of pq is the product of images", _matrix_homomorphism),
    ("quat.polar_reconstruct", "polar form reconstructs q", _polar_reconstruct),
    ("quat.star_exp_slice", "star exponential equals qexp(pq) on a slice", _star_exp_slice),
    ("fock.inner_axioms", "right inner product scaling and hermiticity", _inner_axioms),
    ("fock.left_scale_laws", "left scalar multiplication norm, composition, pairing, additivity", _left_scale_laws),
    ("fock.bargmann_kernel", "reproducing kernel on the diagonal is exp(|q|^2)", _bargmann_kernel),
    ("ladder.canonical_commutator", "[a, adag] = I", _canonical_commutator),
    ("ladder.adjoint", "(adag)^dag = a", _adjoint_of_creation),
    ("ladder.scalar_commutes", "q.a = a.q and q.adag = adag.q", _scalar_commutes_with_ladder),
    ("op.scaling_adjoint", "(q.A)^dag = A^dag.conj(q) and (A.q)^dag = conj(q).A^dag", _scaling_adjoint),
    ("ladder.hamiltonian", "(Q^2 + P^2)/2 = N + I/2", _hamiltonian),
    ("su11.commutators", "su(1,1) commutation relations", _su11),
    ("displacement.unitary", "D(q) unitary", _displacement_unitary),
    ("displacement.conjugate_a", "D(q)^dag a D(q) = a + q", _displacement_conj("a")),
    ("displacement.conjugate_adag", "D(q)^dag adag D(q) = adag + conj(q)", _displacement_conj("adag")),
    ("coherent.from_displacement", "D(q) Phi_0 equals the closed-form coherent state", _coherent_from_displacement),
    ("coherent.eigen_relation", "a eta_q = q.eta_q", _coherent_eigen),
    ("coherent.expectation_table", "six ladder moments on eta_q", _coherent_table),
    ("coherent.position_variance", "<dQ>^2 = 1/2 on eta_q", _position_variance),
    ("coherent.uncertainty_estimate", "|<dQ>^2<dP>^2 - 1/4| <= |q|^2 and the Ci rebuild", _uncertainty_estimate),
    ("ci.conjugate_negative", "conj(Ci) = -Ci and |Ci| <= 1", _ci_conjugate_negative),
    ("ci.slice_collapse", "Ci = i for q in the slice of i", _ci_slice_collapse),
    ("ci.value_at_j", "Ci(j) = i exp(-2)", _ci_at_j),
    ("squeeze.generator_antihermitian", "p.adag^2 - conj(p).a^2 is anti-hermitian", _squeeze_antihermitian),
    ("squeeze.unitary", "S(p) unitary", _squeeze_unitary),
    ("squeeze.adjoint_is_negation", "S(p)^dag = S(-p)", _squeeze_adjoint),
    ("squeeze.su11_form", "su(1,1) generator form equals the direct form", _squeeze_su11),
    ("squeeze.conjugate_a", "S^dag a S = cosh|p| a + (p/|p|) sinh|p|.adag", _squeeze_conj("a")),
    ("squeeze.conjugate_adag", "S^dag adag S = cosh|p| adag + conj(p/|p|) sinh|p|.a", _squeeze_conj("adag")),
    ("squeeze.conjugate_number", "S^dag N S four-term expansion", _squeeze_conj("N")),
    ("pure_squeezed.closed_form", "S(p) Phi_0 equals the squeezed-vacuum closed form", _pure_squeezed_closed),
    ("pure_squeezed.expectation_table", "ladder moments on S(p) Phi_0", _pure_squeezed_table),
    ("pure_squeezed.variance_product", "<dX>^2<dY>^2 = (1 + sinh^2(2|p|) sin^2 theta)/16", _variance_product),
    ("pure_squeezed.rotated_product", "<dU><dV> = 1/4 with unequal factors", _rotated_product),
    ("pure_squeezed.photon_stats", "photon moments and Mandel parameter", _photon_stats),
    ("squeezed.normalized", "S(p)D(q)Phi_0 and D(q)S(p)Phi_0 have unit norm", _squeezed_normalized),
    ("slice.two_photon", "two-photon conjugations on a shared slice", _slice_family(two_photon_conjugation)),
    ("slice.squeezed_coherent", "squeezed-coherent conjugations on a shared slice",
     _slice_family(squeezed_coherent_conjugation)),
    ("fermionic.closed_form", "two-level closed form equals expm", _fermionic_closed),
    ("fermionic.anticommutator", "a adag + adag a = I on two levels", _fermionic_anticommutator),
    ("fermionic.usual_commutators", "[adag a - 1/2, a] = -a and [adag a - 1/2, adag] = adag", _fermionic_usual),
    ("fermionic.orthonormal", "eta_0 and eta_1 orthonormal", _fermionic_orthonormal),
    ("fermionic.generator_square", "(q.adag - conj(q).a)^2 = -|q|^2 I", _fermionic_square),
    ("quadrature.gram", "monomials orthonormal under the r-weighted Gaussian measure", _gram),
]

CHECK_NAMES = tuple(name for name, _, _ in CHECKS)


@dataclass(frozen=True)
class CheckResult:
    name: str
    statement: str
    max_dev: float
    tol: float
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.max_dev <= self.tol

    def to_json(self) -> dict:
        dev = self.max_dev if math.isfinite(self.max_dev) else None
        out = {"name": self.name, "statement": self.statement, "max_dev": dev,
               "tol": self.tol, "pass": self.passed}
        if self.error is not None:
            out["error"] = self.error
        return out


def run_checks(N: int = 64, tol: float = DEFAULT_TOL, seed: int = 0, names=None) -> list[CheckResult]:
    """Run the suite (or the named subset) in a fixed order with one RNG stream per check."""
    out = []
    for idx, (name, statement, fn) in enumerate(CHECKS):
        if names is not None and name not in names:
            continue
        ctx = Context(N, np.random.default_rng([seed, idx]))
        try:
            dev = float(fn(ctx))
            err = None
        except Exception as exc:  # a failing check is reported, not raised
            dev, err = math.inf, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, statement, dev, tol, err))
    return out
