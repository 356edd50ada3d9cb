import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from quatcs.errors import BasisMismatch, DimensionMismatch, NotInImage
from quatcs.fock import basis_vector, inner, random_vector, right_scale, vacuum
from quatcs.observables import position_momentum
from quatcs.operators import (FockOperator, adjoint, anticommutator, commutator, compose,
                              conjugate_by, embed, expm, expm_complex, hamiltonian, identity,
                              is_antihermitian, is_unitary, ladder_a, ladder_adag,
                              ladder_safe_dimension, left_scale_op, number_op, qmatmul,
                              right_scale_op, safe_dimension, unembed, unitarity_defect, zeros)
from quatcs.quaternion import Quaternion
from quatcs.states import displacement, squeeze_generator, su11_generators

comp = st.floats(-2, 2, allow_nan=False)
quats = st.builds(Quaternion, comp, comp, comp, comp)
seeds = st.integers(0, 2 ** 32 - 1)


def rand_op(seed, N=5, scale=1.0):
    return FockOperator(scale * np.random.default_rng(seed).standard_normal((N, N, 4)))


def test_ladder_action():
    a, ad = ladder_a(6), ladder_adag(6)
    assert a.apply(basis_vector(1, 6)).distance(basis_vector(0, 6)) == 0
    assert ad.apply(basis_vector(0, 6)).distance(basis_vector(1, 6)) == 0
    assert a.apply(vacuum(6)).norm() == 0
    assert ad.apply(basis_vector(5, 6)).norm() == 0  # truncation artifact
    assert a.apply(basis_vector(4, 6)).distance(right_scale(basis_vector(3, 6), Quaternion(2.0))) == 0
    with pytest.raises(ValueError):
        ladder_a(1)


def test_canonical_commutator_on_safe_levels():
    N = 10
    m = ladder_safe_dimension(N, 2)
    c = commutator(ladder_a(N), ladder_adag(N))
    assert (c - identity(N)).max_abs(m) <= 1e-12
    assert (c - identity(N)).max_abs() > 1  # the top level is broken by the cut


def test_adjoints():
    assert (adjoint(ladder_adag(7)) - ladder_a(7)).max_abs() == 0
    A = rand_op(1)
    assert (commutator(A, A)).max_abs() == 0


@given(seeds, seeds)
def test_adjoint_pairing(s1, s2):
    A = rand_op(s1)
    rng = np.random.default_rng(s2)
    f, g = random_vector(rng, 5), random_vector(rng, 5)
    assert (inner(A.apply(f), g) - inner(f, A.dag.apply(g))).norm() <= 1e-11


@given(seeds, quats)
def test_apply_respects_right_scaling(seed, q):
    A = rand_op(seed)
    f = random_vector(np.random.default_rng(seed + 1), 5)
    assert A.apply(right_scale(f, q)).distance(right_scale(A.apply(f), q)) <= 1e-11


@given(seeds, quats)
def test_scaling_adjoint_laws(seed, q):
    A = rand_op(seed)
    assert (adjoint(left_scale_op(q, A)) - right_scale_op(adjoint(A), q.conj())).max_abs() <= 1e-14
    assert (adjoint(right_scale_op(A, q)) - left_scale_op(q.conj(), adjoint(A))).max_abs() <= 1e-14
    assert (left_scale_op(Quaternion(1.0), A) - A).max_abs() == 0


@given(quats)
def test_scalar_commutes_with_ladder_exactly(q):
    for L in (ladder_a(6), ladder_adag(6)):
        np.testing.assert_array_equal(left_scale_op(q, L).entries, right_scale_op(L, q).entries)


@given(seeds, quats)
def test_left_scaling_factors_out_of_products(seed, q):
    A, B = rand_op(seed), rand_op(seed + 7)
    assert (compose(left_scale_op(q, A), B) - left_scale_op(q, compose(A, B))).max_abs() <= 1e-12


def test_left_scaling_does_not_pass_through():
    A = FockOperator.from_real(np.eye(2))
    A = left_scale_op(Quaternion(0, 1, 0, 0), A)
    B = left_scale_op(Quaternion(0, 0, 1, 0), identity(2))
    q = Quaternion(0, 0, 0, 1)
    assert (compose(A, left_scale_op(q, B)) - left_scale_op(q, compose(A, B))).max_abs() > 1


def test_number_and_hamiltonian():
    N = 8
    nop = number_op(N)
    assert nop.apply(basis_vector(3, N)).distance(right_scale(basis_vector(3, N), Quaternion(3.0))) == 0
    assert hamiltonian(N).apply(vacuum(N)).distance(right_scale(vacuum(N), Quaternion(0.5))) == 0
    assert (compose(ladder_adag(N), ladder_a(N)) - nop).max_abs() <= 1e-14
    Q, P = position_momentum(N)
    lhs = (compose(Q, Q) + compose(P, P)) * 0.5
    assert (lhs - hamiltonian(N)).max_abs(N - 2) <= 1e-13


def test_su11_relations():
    N = 12
    kp, km, k0 = su11_generators(N)
    m = ladder_safe_dimension(N, 4)
    assert (commutator(k0, kp) - kp).max_abs(m) <= 1e-12
    assert (commutator(k0, km) + km).max_abs(m) <= 1e-12
    assert (commutator(kp, km) + k0 * 2.0).max_abs(m) <= 1e-12
    assert k0.apply(vacuum(N)).distance(right_scale(vacuum(N), Quaternion(0.25))) == 0
    with pytest.raises(ValueError):
        su11_generators(3)


def test_fermionic_anticommutator():
    a, ad = ladder_a(2), ladder_adag(2)
    assert (anticommutator(a, ad) - identity(2)).max_abs() == 0


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        compose(identity(3), identity(4))
    other = FockOperator(np.zeros((3, 3, 4)), basis_tag="hermite")
    with pytest.raises(BasisMismatch):
        identity(3) + other
    with pytest.raises(DimensionMismatch):
        identity(3).apply(vacuum(4))
    with pytest.raises(DimensionMismatch):
        FockOperator(np.zeros((3, 2, 4)))


def complex_left(seed, n=4):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


@given(seeds, seeds)
def test_embed_star_homomorphism(s1, s2):
    A, B = rand_op(s1), rand_op(s2)
    np.testing.assert_allclose(embed(compose(A, B)), embed(A) @ embed(B), atol=1e-12)
    np.testing.assert_array_equal(embed(adjoint(A)), embed(A).conj().T)
    np.testing.assert_array_equal(unembed(embed(A)).entries, A.entries)
    np.testing.assert_allclose(np.linalg.norm(embed(A), "fro") ** 2, 2 * A.frobenius() ** 2)


def test_embed_identity_and_ladder():
    np.testing.assert_array_equal(embed(identity(5)), np.eye(10))
    a, ad = ladder_a(5), ladder_adag(5)
    np.testing.assert_allclose(embed(compose(a, ad)), embed(a) @ embed(ad), atol=1e-15)


def test_unembed_rejects_foreign_blocks():
    E = np.eye(4, dtype=complex)
    E[0, 0] = 2.0
    with pytest.raises(NotInImage):
        unembed(E)
    with pytest.raises(NotInImage):
        unembed(np.eye(3))


def test_qmatmul_against_embedding():
    A, B = rand_op(5, 6), rand_op(6, 6)
    np.testing.assert_allclose(embed(FockOperator(qmatmul(A.entries, B.entries))),
                               embed(A) @ embed(B), atol=1e-12)


@given(seeds, st.floats(0.01, 6))
def test_expm_complex_matches_scipy(seed, scale):
    M = complex_left(seed, 6)
    M *= scale / np.abs(M).sum(axis=0).max()
    ref = scipy.linalg.expm(M)
    np.testing.assert_allclose(expm_complex(M), ref, atol=1e-12 * max(1, np.abs(ref).max()))


def test_expm_zero_is_identity():
    assert (expm(zeros(6)) - identity(6)).max_abs() == 0


def test_expm_real_generator_matches_complex_fock_oracle():
    N, theta = 20, 0.7
    a = np.diag(np.sqrt(np.arange(1, N)), 1)
    ref = scipy.linalg.expm(theta * (a.T - a))
    got = expm((ladder_adag(N) - ladder_a(N)) * theta)
    np.testing.assert_allclose(got.entries[..., 0], ref, atol=1e-10)
    assert np.abs(got.entries[..., 1:]).max() == 0


def test_expm_two_level_closed_form():
    q = Quaternion(0.3, -1.2, 0.5, 2.0)
    r = q.norm()
    G = left_scale_op(q, ladder_adag(2)) - left_scale_op(q.conj(), ladder_a(2))
    closed = (identity(2) * math.cos(r) + left_scale_op(q * (math.sin(r) / r), ladder_adag(2))
              - left_scale_op(q.conj() * (math.sin(r) / r), ladder_a(2)))
    assert (expm(G) - closed).max_abs() <= 1e-13


@given(seeds, st.floats(0.1, 3))
def test_expm_of_antihermitian_is_unitary(seed, scale):
    A = rand_op(seed, 6)
    G = (A - A.dag) * (scale / A.frobenius())
    assert is_antihermitian(G)
    U = expm(G)
    assert is_unitary(U, 1e-12)


def test_is_unitary_and_antihermitian_examples():
    assert is_unitary(identity(4))
    assert not is_unitary(ladder_a(4))
    assert is_antihermitian(squeeze_generator(Quaternion(0.2, 0.5, -0.1, 0.3), 10))
    assert not is_antihermitian(ladder_a(4))


def test_safe_dimension_tracks_leakage():
    D = displacement(Quaternion(0, 1.2, 0, 0), 40)
    m = safe_dimension(D, 2)
    assert 0 < m <= ladder_safe_dimension(40, 2)
    assert safe_dimension(D, 2, margin=40) == 0
    # columns within degree + margin of the cut are never trusted
    assert safe_dimension(identity(20), 2) == 10


def test_conjugate_by_is_u_dagger_a_u():
    U, A = rand_op(1, 4), rand_op(2, 4)
    assert (conjugate_by(U, A) - compose(adjoint(U), compose(A, U))).max_abs() == 0


def test_unitarity_defect_measures_max_entry():
    assert unitarity_defect(identity(3) * 2.0) == pytest.approx(3.0)
