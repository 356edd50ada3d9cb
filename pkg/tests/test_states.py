import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from quatcs.errors import TruncationTooSmall
from quatcs.fock import FockVector, right_scale, vacuum
from quatcs.operators import adjoint, compose, is_unitary, ladder_a, ladder_safe_dimension
from quatcs.quaternion import I_UNIT, J_UNIT, K_UNIT, Quaternion
from quatcs.states import (coherent, coherent_coefficients, coherent_tail_mass, displacement,
                           fermionic, fermionic_closed_operator, fermionic_expm, printed_series_report,
                           pure_squeezed, squeeze, squeeze_su11, squeezed_DS, squeezed_SD,
                           squeezed_vacuum_closed_form)

small = st.floats(-0.6, 0.6, allow_nan=False)
small_quats = st.builds(Quaternion, small, small, small, small)
# |p| <= 0.6 keeps the N = 64 truncation error below 1e-11
tiny = st.floats(-0.3, 0.3, allow_nan=False)
squeezes = st.builds(Quaternion, tiny, tiny, tiny, tiny)


def complex_fock(N):
    a = np.diag(np.sqrt(np.arange(1, N)), 1).astype(complex)
    return a, a.T.copy()


def slice_to_complex(coeffs, comp):
    """Read FockVector coefficients lying in R + e_comp R as complex numbers."""
    return coeffs[:, 0] + 1j * coeffs[:, comp]


@pytest.mark.parametrize("comp,unit", [(1, I_UNIT), (2, J_UNIT), (3, K_UNIT)])
@pytest.mark.parametrize("x,y", [(0.4, 0.0), (0.3, -0.5), (-0.2, 0.9)])
def test_squeezed_vacuum_matches_complex_oracle(comp, unit, x, y):
    N = 40
    a, ad = complex_fock(N)
    z = x + 1j * y
    ref = scipy.linalg.expm(0.5 * (z * ad @ ad - np.conj(z) * a @ a))[:, 0]
    got = pure_squeezed(Quaternion(x) + unit * y, N).coeffs
    np.testing.assert_allclose(slice_to_complex(got, comp), ref, atol=1e-12)
    others = [c for c in (1, 2, 3) if c != comp]
    assert np.abs(got[:, others]).max() == 0


@pytest.mark.parametrize("x,y", [(0.7, 0.2), (-0.3, 0.5)])
def test_coherent_matches_complex_displacement(x, y):
    N = 40
    a, ad = complex_fock(N)
    z = x + 1j * y
    ref = scipy.linalg.expm(z * ad - np.conj(z) * a)[:, 0]
    got = coherent(Quaternion(x, y, 0, 0), N).vector.coeffs
    np.testing.assert_allclose(slice_to_complex(got, 1), ref, atol=1e-12)


@given(small_quats)
def test_coherent_eigen_relation(q):
    N = 30
    eta = coherent(q, N).vector
    m = N - 1
    lhs = ladder_a(N).apply(eta).coeffs[:m]
    rhs = right_scale(eta, q).coeffs[:m]
    np.testing.assert_allclose(lhs, rhs, atol=1e-13)
    assert abs(eta.norm() - 1.0) <= 1e-12


def test_coherent_from_displacement():
    q = Quaternion(0.5, -0.3, 0.8, 0.2)
    N = 48
    via_d = displacement(q, N).apply(vacuum(N))
    assert via_d.distance(coherent(q, N).vector) <= 1e-12


def test_coherent_truncation_guard():
    with pytest.raises(TruncationTooSmall):
        coherent(Quaternion(5.0), 16)
    assert coherent_tail_mass(Quaternion(), 3) == 0.0
    # Poisson tail: P(n >= 1) for mean 1 is 1 - e^-1
    assert coherent_tail_mass(Quaternion(1.0), 1) == pytest.approx(1 - math.exp(-1), abs=1e-15)
    c = coherent_coefficients(Quaternion(0, 0, 2.0, 0), 3)
    np.testing.assert_allclose(c[2], [-4 / math.sqrt(2) * math.exp(-2), 0, 0, 0], atol=1e-15)


@given(small_quats)
def test_squeeze_unitary_and_inverse(p):
    N = 24
    S = squeeze(p, N)
    assert is_unitary(S, 1e-12)
    assert (adjoint(S) - squeeze(-p, N)).max_abs() <= 1e-12
    assert (squeeze_su11(p, N) - S).max_abs() <= 1e-12


@given(squeezes)
def test_pure_squeezed_closed_form(p):
    N = 64
    got = pure_squeezed(p, N).coeffs[:20]
    ref = squeezed_vacuum_closed_form(p, N)[:20]
    np.testing.assert_allclose(got, ref, atol=1e-11)


def test_pure_squeezed_is_even():
    eta = pure_squeezed(Quaternion(0.2, 0.3, -0.4, 0.1), 30)
    assert np.abs(eta.coeffs[1::2]).max() == 0
    assert abs(eta.norm() - 1) <= 1e-13


def test_printed_series_departs_from_expm():
    rep = printed_series_report(Quaternion(0, 0.5, 0, 0), 64, 4)
    # frozen from the closed form with exp(|p|^2/4) prefactor
    assert rep["printed_abs"][0] == pytest.approx(math.exp(0.0625), rel=1e-14)
    assert rep["expm_abs"][0] == pytest.approx(1 / math.sqrt(math.cosh(0.5)), rel=1e-12)
    assert rep["ratio_to_expm"][-1] > 3
    big = printed_series_report(Quaternion(0, 1.0, 0, 0), 64, 8)
    assert big["printed_increasing"]
    assert big["printed_norm_squared"] > 1e20


def test_sd_and_ds_orders_differ():
    q, p = Quaternion(0.6, 0.2, 0, 0), Quaternion(0.4, 0, 0.3, 0)
    sd, ds = squeezed_SD(q, p, 48), squeezed_DS(q, p, 48)
    assert abs(sd.norm() - 1) <= 1e-12 and abs(ds.norm() - 1) <= 1e-12
    assert sd.distance(ds) > 1e-3


def test_sd_with_zero_squeeze_is_coherent():
    q = Quaternion(0.3, 0, -0.7, 0.1)
    np.testing.assert_array_equal(squeezed_SD(q, Quaternion(), 32).coeffs,
                                  coherent(q, 32).vector.coeffs)


def test_fermionic_frozen_value():
    pair = fermionic(I_UNIT)
    np.testing.assert_allclose(pair.eta0.coeffs, [[math.cos(1), 0, 0, 0], [0, math.sin(1), 0, 0]],
                               atol=1e-16)
    np.testing.assert_allclose(pair.eta1.coeffs, [[0, math.sin(1), 0, 0], [math.cos(1), 0, 0, 0]],
                               atol=1e-16)


@given(st.builds(Quaternion, *(st.floats(-3, 3, allow_nan=False),) * 4))
def test_fermionic_closed_form_matches_expm(q):
    closed = fermionic_closed_operator(q)
    assert (closed - fermionic_expm(q)).max_abs() <= 1e-12
    pair = fermionic(q)
    assert abs(pair.eta0.norm() - 1) <= 1e-13 and abs(pair.eta1.norm() - 1) <= 1e-13
    from quatcs.fock import inner
    assert inner(pair.eta0, pair.eta1).norm() <= 1e-13


def test_fermionic_zero_and_tiny():
    pair = fermionic(Quaternion())
    assert pair.eta0.distance(vacuum(2)) == 0
    tiny = Quaternion(1e-9, 0, 0, 0)
    assert (fermionic_closed_operator(tiny) - fermionic_expm(tiny)).max_abs() <= 1e-16


def test_squeeze_leaves_safe_block_intact():
    # truncation-independence of the leading block
    p = Quaternion(0.1, 0.2, 0.0, -0.3)
    small_S, big_S = squeeze(p, 40), squeeze(p, 60)
    m = 10
    np.testing.assert_allclose(small_S.block(m), big_S.block(m), atol=1e-12)
    assert ladder_safe_dimension(40, 2) > m
    assert isinstance(pure_squeezed(p, 12), FockVector)
    assert compose(small_S, adjoint(small_S)).N == 40
