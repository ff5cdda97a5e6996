import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdelta.algebra import (
    I,
    J,
    K,
    ONE,
    PhysicalConstants,
    Quaternion,
    is_zero,
    quat_mul,
    quat_sandwich,
    similar_to,
    symplectic_mul,
)
from qdelta.errors import ZeroAmplitude

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion.from_components, finite, finite, finite, finite)


def hamilton(p, q):
    """Component-wise Hamilton product, written out independently."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def close(p: Quaternion, q: Quaternion, tol=1e-14):
    scale = max(1.0, p.norm(), q.norm())
    return (p - q).norm() <= tol * scale


def test_unit_table():
    assert quat_mul(I, J) == K
    assert quat_mul(J, I) == -K
    for u in (I, J, K):
        assert quat_mul(u, u) == -ONE
    assert quat_mul(J, K) == I
    assert quat_mul(K, I) == J


def test_identity_and_components_round_trip():
    q = Quaternion.from_components(1.5, -2.0, 0.25, 3.0)
    assert quat_mul(ONE, q) == q
    assert quat_mul(q, ONE) == q
    assert Quaternion.from_components(*q.components) == q
    assert q.z0 == complex(1.5, -2.0) and q.z1 == complex(0.25, 3.0)


def test_sandwich_examples():
    q = Quaternion.from_components(0.3, -1.0, 2.0, 0.5)
    assert quat_sandwich(ONE, q) == q
    assert quat_sandwich(J, I) == -I
    with pytest.raises(ZeroAmplitude):
        quat_sandwich(Quaternion(), q)


def test_similar_to_sandwiches_back_to_complex():
    A = Quaternion.from_components(0.4, -0.2, 1.1, 0.7)
    Q = similar_to(A, 0.5 - 2j)
    assert close(quat_sandwich(A, Q), Quaternion(0.5 - 2j), 1e-14)


@settings(max_examples=300)
@given(quats, quats)
def test_product_matches_hamilton_expansion(p, q):
    expected = Quaternion.from_components(*hamilton(p.components, q.components))
    assert close(p * q, expected)


@settings(max_examples=300)
@given(quats, quats)
def test_norm_multiplicative_and_conjugate_reverses(p, q):
    pq = p * q
    assert math.isclose(pq.norm(), p.norm() * q.norm(), rel_tol=1e-14, abs_tol=1e-300)
    assert close(pq.conj(), q.conj() * p.conj())


@settings(max_examples=200)
@given(quats, quats, quats)
def test_associative_and_distributive(p, q, r):
    assert close((p * q) * r, p * (q * r), 1e-13)
    assert close(p * (q + r), p * q + p * r, 1e-13)


@settings(max_examples=300)
@given(quats, quats)
def test_sandwich_preserves_norm(A, Q):
    if A.norm() == 0:
        return
    assert math.isclose(quat_sandwich(A, Q).norm(), Q.norm(), rel_tol=1e-13, abs_tol=1e-300)


def test_symplectic_rule_on_random_pairs(rng):
    comps = rng.normal(size=(10_000, 8))
    p0 = comps[:, 0] + 1j * comps[:, 1]
    p1 = comps[:, 2] + 1j * comps[:, 3]
    q0 = comps[:, 4] + 1j * comps[:, 5]
    q1 = comps[:, 6] + 1j * comps[:, 7]
    r0, r1 = symplectic_mul(p0, p1, q0, q1)
    h = hamilton(comps[:, :4].T, comps[:, 4:].T)
    assert np.max(np.abs(r0 - (h[0] + 1j * h[1]))) < 1e-13
    assert np.max(np.abs(r1 - (h[2] + 1j * h[3]))) < 1e-13


def test_amplitude_times_complex_moves_conjugate(rng):
    # (A0 + A1 j) psi = A0 psi + A1 conj(psi) j
    for _ in range(200):
        a0, a1, psi = (complex(*rng.normal(size=2)) for _ in range(3))
        prod = Quaternion(a0, a1) * psi
        assert abs(prod.z0 - a0 * psi) < 1e-14
        assert abs(prod.z1 - a1 * psi.conjugate()) < 1e-14
        # same as the full quaternion product with psi embedded
        assert close(prod, Quaternion(a0, a1) * Quaternion(psi))


def test_scalar_multiplication_sides():
    q = Quaternion(1 + 2j, 3 - 1j)
    assert 1j * q == I * q
    assert q * 1j == q * I


def test_inverse_and_parts():
    q = Quaternion.from_components(1.0, 2.0, -2.0, 4.0)
    assert close(q * q.inverse(), ONE)
    assert q.real == 1.0
    assert math.isclose(q.imag_norm, math.sqrt(4 + 4 + 16))
    with pytest.raises(ZeroDivisionError):
        Quaternion().inverse()


def test_constants_and_zero_test():
    c = PhysicalConstants(2.0, 3.0)
    assert c.m_over_hbar2 == 0.75
    assert c.kinetic == 4.0 / 6.0
    with pytest.raises(ValueError):
        PhysicalConstants(0.0, 1.0)
    assert is_zero(1e-13, 1.0)
    assert not is_zero(1e-11, 1.0)
    assert is_zero(0.0)
    assert not is_zero(1e-300)


def test_coerce_rejects_strings():
    with pytest.raises(TypeError):
        Quaternion.coerce("1")
