import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quatcs.errors import BadAxis, MalformedMatrix, ParseError
from quatcs.quaternion import (I_UNIT, J_UNIT, K_UNIT, Quaternion, format_quaternion,
                               from_matrix, parse_quaternion, polar, qexp, qmul, qnorm,
                               reconstruct, sigma_matrix, slice_decompose, star_exp,
                               to_matrix, check_axis)

comp = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, comp, comp, comp, comp)


def left_matrix(p):
    """4x4 real matrix of left multiplication by p (independent oracle)."""
    a, b, c, d = p.array
    return np.array([[a, -b, -c, -d],
                     [b, a, -d, c],
                     [c, d, a, -b],
                     [d, -c, b, a]])


def close(p, q, tol=1e-12):
    return (p - q).norm() <= tol


def test_unit_table():
    assert qmul(I_UNIT, J_UNIT) == K_UNIT
    assert qmul(J_UNIT, I_UNIT) == -K_UNIT
    assert qmul(J_UNIT, K_UNIT) == I_UNIT
    assert qmul(K_UNIT, I_UNIT) == J_UNIT
    for u in (I_UNIT, J_UNIT, K_UNIT):
        assert qmul(u, u) == Quaternion(-1.0)


def test_product_matches_real_matrix_oracle():
    p, q = Quaternion(1, 1, 0, 0), Quaternion(1, 0, 1, 0)
    assert p * q == Quaternion(1, 1, 1, 1)
    np.testing.assert_allclose((p * q).array, left_matrix(p) @ q.array, atol=1e-15)


@given(quats, quats)
def test_product_oracle_random(p, q):
    np.testing.assert_allclose((p * q).array, left_matrix(p) @ q.array, atol=1e-12)


@given(quats, quats, quats)
def test_associative_and_distributive(p, q, r):
    assert close((p * q) * r, p * (q * r), 1e-10)
    assert close(p * (q + r), p * q + p * r, 1e-11)


@given(quats, quats)
def test_conjugation_reverses_products(p, q):
    assert close((p * q).conj(), q.conj() * p.conj())
    assert p.conj().conj() == p


@given(quats, quats)
def test_norm_multiplicative(p, q):
    assert abs((p * q).norm() - p.norm() * q.norm()) <= 1e-12 * max(1.0, p.norm() * q.norm())


def test_norm_examples():
    assert qnorm(I_UNIT) == 1.0
    assert qnorm(Quaternion(1, 1, 1, 1)) == 2.0
    assert qnorm(Quaternion()) == 0.0


def test_matrix_images():
    np.testing.assert_array_equal(to_matrix(I_UNIT), np.array([[0, 1j], [1j, 0]]))
    np.testing.assert_array_equal(to_matrix(Quaternion(1.0)), np.eye(2))
    m = to_matrix(Quaternion(1, 2, 3, 4))
    np.testing.assert_array_equal(m, np.array([[1 + 4j, -3 + 2j], [3 + 2j, 1 - 4j]]))


@given(quats, quats)
def test_matrix_homomorphism(p, q):
    np.testing.assert_allclose(to_matrix(p * q), to_matrix(p) @ to_matrix(q), atol=1e-12)
    np.testing.assert_allclose(to_matrix(p.conj()), to_matrix(p).conj().T, atol=0)
    assert close(from_matrix(to_matrix(p)), p, 0)


def test_from_matrix_rejects_non_image():
    with pytest.raises(MalformedMatrix):
        from_matrix(np.array([[1, 0], [0, 2]], dtype=complex))


def test_polar_examples():
    pf = polar(Quaternion(1.0))
    assert (pf.r, pf.theta) == (1.0, 0.0)
    pf = polar(I_UNIT)
    assert pf.r == 1.0
    assert pf.theta == pytest.approx(math.pi / 2)
    assert pf.phi == pytest.approx(math.pi / 2)
    assert pf.psi == pytest.approx(0.0)


@given(quats)
def test_polar_reconstruction(q):
    pf = polar(q)
    assert 0 <= pf.theta <= math.pi and 0 <= pf.phi <= math.pi and 0 <= pf.psi < 2 * math.pi
    assert close(reconstruct(pf), q, 1e-12 * max(1.0, q.norm()))
    np.testing.assert_allclose(pf.matrix(), to_matrix(q), atol=1e-12 * max(1.0, q.norm()))


@given(st.floats(0, math.pi), st.floats(0, 2 * math.pi))
def test_sigma_is_involutive_and_selfadjoint(phi, psi):
    s = sigma_matrix(phi, psi)
    np.testing.assert_allclose(s @ s, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(s, s.conj().T, atol=0)


def test_polar_degenerate_axis_is_i():
    for q in (Quaternion(-2.0), Quaternion(0.0)):
        assert polar(q).axis == I_UNIT


def test_qexp_examples():
    assert qexp(Quaternion()) == Quaternion(1.0)
    assert close(qexp(I_UNIT * math.pi), Quaternion(-1.0), 1e-15)
    assert close(qexp(J_UNIT * (math.pi / 2)), J_UNIT, 1e-15)


def test_qexp_against_series_oracle():
    q = Quaternion(0.3, -0.4, 0.8, 0.1)
    term, total = Quaternion(1.0), Quaternion(1.0)
    for n in range(1, 40):
        term = term * q / n
        total = total + term
    assert close(qexp(q), total, 1e-14)


def test_star_exp_examples():
    q = Quaternion(0.2, 0.7, -0.1, 0.4)
    assert close(star_exp(Quaternion(1.5), q), qexp(q * 1.5), 1e-13)
    # brute-force partial sums of i^m j^m / m!: cosh 1 + k sinh 1
    assert close(star_exp(I_UNIT, J_UNIT), Quaternion(math.cosh(1), 0, 0, math.sinh(1)), 1e-14)
    # the slice exponential differs: exp(k) = cos 1 + k sin 1
    assert (star_exp(I_UNIT, J_UNIT) - qexp(K_UNIT)).norm() > 0.5


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2),
       st.sampled_from([I_UNIT, J_UNIT, K_UNIT, Quaternion(0, 1, 1, 1) / math.sqrt(3)]))
def test_star_exp_on_slice_and_bound(x1, y1, x2, y2, u):
    p = Quaternion(x1) + u * y1
    q = Quaternion(x2) + u * y2
    val = star_exp(p, q)
    assert close(val, qexp(p * q), 1e-10 * math.exp(p.norm() * q.norm()))
    assert val.norm() <= math.exp(p.norm() * q.norm()) * (1 + 1e-12)


def test_slice_decompose_examples():
    s = slice_decompose(Quaternion(3, 4, 0, 0))
    assert (s.x, s.y, s.axis) == (3.0, 4.0, I_UNIT)
    s = slice_decompose(Quaternion(1, 0, 1, 1))
    assert s.y == pytest.approx(math.sqrt(2))
    assert close(s.axis, Quaternion(0, 0, 1, 1) / math.sqrt(2), 1e-15)
    s = slice_decompose(Quaternion(-2.0))
    assert s.y == 0.0 and s.axis == I_UNIT


@given(quats)
def test_slice_value_roundtrip(q):
    s = slice_decompose(q)
    assert s.y >= 0
    assert close(s.value, q, 1e-12 * max(1, q.norm()))
    assert close(s.axis * s.axis, Quaternion(-1.0), 1e-14)


def test_slice_commutativity_and_witness():
    a = Quaternion(1) + I_UNIT * 2
    b = Quaternion(-3) + I_UNIT * 0.5
    assert a * b == b * a
    c = Quaternion(1) + J_UNIT
    assert (a * c - c * a).norm() > 1


def test_check_axis():
    assert check_axis(J_UNIT) == J_UNIT
    with pytest.raises(BadAxis):
        check_axis(Quaternion(0, 1, 1, 0))
    with pytest.raises(BadAxis):
        check_axis(Quaternion(1, 0, 0, 0))


@pytest.mark.parametrize("text,value", [
    ("1", Quaternion(1.0)),
    ("1i", I_UNIT),
    ("i", I_UNIT),
    ("-j", -J_UNIT),
    ("1+2i-3j+4k", Quaternion(1, 2, -3, 4)),
    ("0.5e-1k", Quaternion(0, 0, 0, 0.05)),
    ("2+i", Quaternion(2, 1, 0, 0)),
])
def test_parse_quaternion(text, value):
    assert parse_quaternion(text) == value


@pytest.mark.parametrize("text,column", [
    ("", 1), ("1+2x", 4), ("1 +i", 2), ("1i2", 3), ("1+i+i", 4),
])
def test_parse_errors_report_column(text, column):
    with pytest.raises(ParseError) as exc:
        parse_quaternion(text)
    assert exc.value.column == column


@given(quats)
def test_format_parse_roundtrip(q):
    assert parse_quaternion(format_quaternion(q)) == q


def test_division_by_subnormal_scalar():
    x = 2.225073858507e-311
    assert Quaternion(x, 0, 0, 0) / x == Quaternion(1.0)
