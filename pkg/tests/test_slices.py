import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatcs.errors import BadAxis, SliceMismatch
from quatcs.fock import vacuum
from quatcs.observables import expectation
from quatcs.operators import ladder_a
from quatcs.quaternion import I_UNIT, J_UNIT, K_UNIT, Quaternion
from quatcs.slices import (DEFAULT_AXES, SlicePair, in_slice, noncommutativity_witness,
                           slice_formula_deviation, squeezed_coherent_conjugation,
                           two_photon_conjugation, verification_table)
from quatcs.states import squeezed_SD

N = 48
DIAG = Quaternion(0, 1, 1, 1) / math.sqrt(3)


def test_in_slice():
    assert in_slice(Quaternion(2, 0.5, 0, 0), I_UNIT)
    assert in_slice(Quaternion(2.0), J_UNIT)
    assert not in_slice(Quaternion(0, 0.5, 0.1, 0), I_UNIT)


def test_slice_pair_validation():
    with pytest.raises(SliceMismatch):
        SlicePair(I_UNIT, Quaternion(0, 0, 0.3, 0), Quaternion(0.1))
    with pytest.raises(BadAxis):
        SlicePair(Quaternion(0, 1, 1, 0), Quaternion(), Quaternion())
    sp = SlicePair.from_polar(K_UNIT, 0.5, math.pi / 2, 0.6, 0.0)
    assert (sp.p - K_UNIT * 0.5).norm() <= 1e-16
    assert (sp.I_p - K_UNIT).norm() <= 1e-16
    assert SlicePair(I_UNIT, Quaternion(), Quaternion()).I_p == Quaternion(1.0)


@pytest.mark.parametrize("which", ["a", "adag", "N"])
@pytest.mark.parametrize("axis", [I_UNIT, J_UNIT, K_UNIT, DIAG])
def test_both_families_on_slices(which, axis):
    sp = SlicePair.from_polar(axis, 0.4, 2.0, 0.6, 0.7)
    for fn in (two_photon_conjugation, squeezed_coherent_conjugation):
        res = fn(sp, which, N)
        assert res.safe_dim >= 1
        assert res.max_dev <= 1e-10


@settings(max_examples=15)
@given(st.floats(0, 0.4), st.floats(0, 2 * math.pi), st.floats(0, 0.8), st.floats(0, 2 * math.pi),
       st.sampled_from([I_UNIT, J_UNIT, K_UNIT, DIAG]))
def test_slice_identity_property(pr, pt, qr, qt, axis):
    sp = SlicePair.from_polar(axis, pr, pt, qr, qt)
    assert two_photon_conjugation(sp, "a", N).max_dev <= 1e-10


def test_trivial_parameters_give_exact_ladder():
    sp = SlicePair(I_UNIT, Quaternion(), Quaternion())
    res = two_photon_conjugation(sp, "a", 16)
    assert res.max_dev == 0.0


def test_noncommutativity_witness():
    w = noncommutativity_witness(N)
    assert w.dev > 0.5
    # same moduli on a shared slice: the closed form holds
    same = slice_formula_deviation(Quaternion(0, 0.4, 0, 0), Quaternion(0, 0.7, 0, 0), "a", N)
    assert same.dev <= 1e-10
    # real p commutes with everything, so any q works
    real = slice_formula_deviation(Quaternion(0.4), Quaternion(0, 0, 0.7, 0), "a", N)
    assert real.dev <= 1e-10


def test_first_moment_on_vacuum():
    sp = SlicePair.from_polar(J_UNIT, 0.5, 1.1, 0.6, 0.3)
    state = squeezed_SD(sp.q, sp.p, 64)
    measured = expectation(state, ladder_a(64))
    r = 0.5
    closed = sp.q * math.cosh(r) + sp.I_p * math.sinh(r) * sp.q.conj()
    assert (measured - closed).norm() <= 1e-10
    # vacuum expectation of a is zero
    assert expectation(vacuum(8), ladder_a(8)).norm() == 0


def test_verification_table_small():
    rows = verification_table(axes=DEFAULT_AXES[:1], p_abs=(0.2,), theta_p=(0.0,), N=32)
    assert len(rows) == 2 * 3
    assert {r["family"] for r in rows} == {"two_photon", "squeezed_coherent"}
    assert all(r["max_dev"] <= 1e-10 and r["safe_dim"] >= 1 for r in rows)
