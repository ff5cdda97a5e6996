import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdelta import complex_delta as cd
from qdelta import quat_left as ql
from qdelta.algebra import PhysicalConstants, Quaternion, similar_to
from qdelta.errors import DegenerateCoupling, NotConfining, NotStationary, SingularMatching, ZeroStrength
from qdelta.oracle import eig2, jump_residual, pde_residual, solve_matching_direct

SC = cd.StationarityClass
coord = st.floats(-5, 5, allow_nan=False)


def numpy_k(E, U, sign):
    """K from numpy's eigenvalues of the evolution matrix (independent of eig2)."""
    lams = np.linalg.eigvals(ql.evolution_matrix(E, U))
    target = ql.eigenvalue(E, U, sign)
    lam = min(lams, key=lambda l: abs(l - target))
    K = np.sqrt(2 * lam)
    return K if K.real >= 0 else -K


def test_stationary_example():
    U = Quaternion(0, math.sqrt(3))
    br = ql.solve_autonomous_left(2j, U, eig_sign=-1)
    assert abs(br.K - complex(0, math.sqrt(2))) < 1e-14
    assert abs(numpy_k(2j, U, -1) - br.K) < 1e-14
    assert br.eigen_residual < 1e-15
    assert ql.classify_stationarity_left(2j, U) is SC.PURE_STATIONARY
    assert math.isclose(ql.stationary_k1_squared(2.0, 0.0, math.sqrt(3)), 2.0)


def test_free_particle_and_degenerate_coupling():
    assert ql.alpha_beta(0j, Quaternion()) == (0.0, 0.0)
    assert ql.eigenvalue(0j, Quaternion(), 1) == 0
    with pytest.raises(DegenerateCoupling):
        ql.solve_autonomous_left(1j, Quaternion(0.5))


@settings(max_examples=300, deadline=None)
@given(coord, coord, coord, coord, coord, coord, st.sampled_from([1, -1]))
def test_branch_is_an_eigenvector(e0, e1, v0, v1, w0, w1, sign):
    if w0 == 0 and w1 == 0:
        return
    E, U = complex(e0, e1), Quaternion(complex(v0, v1), complex(w0, w1))
    br = ql.solve_autonomous_left(E, U, eig_sign=sign)
    assert br.eigen_residual < 1e-10
    assert math.isclose(abs(br.A0) ** 2 + abs(br.A1) ** 2, 1.0, rel_tol=1e-14)
    lam = br.K**2 / 2
    # characteristic polynomial rather than eigvals, which lose half the
    # digits near a double eigenvalue
    M = ql.evolution_matrix(E, U)
    char = lam * lam - np.trace(M) * lam + (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    assert abs(char) < 1e-11 * max(1.0, abs(lam), abs(np.trace(M))) ** 2


def test_given_a0_fixes_scale():
    U = Quaternion(0.1 + 0.2j, 0.7 - 0.4j)
    ref = ql.solve_autonomous_left(0.5 + 1j, U)
    br = ql.solve_autonomous_left(0.5 + 1j, U, A0=2j)
    assert abs(br.A1 - (ref.A1 / ref.A0.conjugate()) * (-2j)) < 1e-14
    assert br.eigen_residual < 1e-14


def test_closed_forms_match_numpy(rng):
    for _ in range(500):
        E = complex(*rng.uniform(-5, 5, 2))
        U = Quaternion.from_components(*rng.uniform(-5, 5, 4))
        for sign in (1, -1):
            k0s, k1s = ql.k_squares(E, U, sign)
            K = numpy_k(E, U, sign)
            scale = max(k0s, k1s)
            assert abs(k0s - K.real**2) < 1e-8 * scale
            assert abs(k1s - K.imag**2) < 1e-8 * scale


def test_reduction_without_coupling(rng):
    for _ in range(100):
        E = complex(*rng.uniform(-5, 5, 2))
        V = complex(*rng.uniform(-5, 5, 2))
        U = Quaternion(V)
        alpha, beta = ql.alpha_beta(E, U)
        assert math.isclose(math.hypot(alpha, beta), (E.real + V.imag) ** 2 + E.imag**2, rel_tol=1e-13)
        sign = ql.complex_limit_sign(E, U)
        k0s, k1s = ql.k_squares(E, U, sign)
        c0, c1 = cd.k_squares(E, V)
        assert abs(k0s - c0) < 1e-10 * max(1, c0) and abs(k1s - c1) < 1e-10 * max(1, c1)


def test_amplitude_vanishes_in_complex_limit():
    E, V = 0.4 + 1.5j, 0.3 - 0.2j
    ratios = []
    for u1 in (1e-2, 1e-4, 1e-6):
        U = Quaternion(V, u1)
        br = ql.solve_autonomous_left(E, U, eig_sign=ql.complex_limit_sign(E, U))
        ratios.append(abs(br.A1 / br.A0))
        assert abs(br.K - cd.solve_autonomous(E, V).K) < 10 * u1**2
    assert ratios[0] > ratios[1] > ratios[2] < 1e-6


def test_printed_amplitude_ratio_is_not_the_eigenvector():
    E, U = 0.4 + 1.5j, Quaternion(0.3 - 0.2j, 0.8 + 0.1j)
    br = ql.solve_autonomous_left(E, U, eig_sign=1)
    derived = br.A1 / br.A0.conjugate()
    assert abs(ql.printed_amplitude_ratio(E, U, 1) - derived) > 1e-3


@pytest.mark.parametrize(
    "E, U, expected",
    [
        (2j, Quaternion(0, math.sqrt(3)), SC.PURE_STATIONARY),
        (1j, Quaternion(3, 0.5), SC.PURE_NON_OSCILLATORY),
        (0.1 + 2j, Quaternion(0, 1), SC.MIXED),
        (2j, Quaternion(0, 2), SC.DEGENERATE),
    ],
)
def test_left_classification(E, U, expected):
    assert ql.classify_stationarity_left(E, U) is expected


def test_non_oscillatory_branch_has_real_k():
    E, U = 1j, Quaternion(3, 0.5)
    k = [ql.solve_autonomous_left(E, U, eig_sign=s).K for s in (1, -1)]
    assert all(abs(x.imag) < 1e-15 and x.real > 0 for x in k)


def test_delta_examples():
    br = ql.solve_delta_left(Quaternion(0, 1))
    assert abs(br.K - (-1j)) < 1e-15
    assert abs(ql.solve_delta_left(Quaternion(0, 1), eig_sign=-1).K - 1j) < 1e-15
    vals = sorted(eig2([[0, -1], [1, 0]]).values, key=lambda z: z.imag)
    assert abs(vals[0] + 1j) < 1e-15 and abs(vals[1] - 1j) < 1e-15
    # a complex strength recovers K = -m q / hbar^2
    q = -1.5 + 0.7j
    br = ql.solve_delta_left(Quaternion(q), eig_sign=1)
    assert abs(br.K - (-q)) < 1e-15
    with pytest.raises(ZeroStrength):
        ql.solve_delta_left(Quaternion())


def test_delta_against_eig2_and_sandwich(rng):
    c = PhysicalConstants(hbar=1.3, mass=0.7)
    for _ in range(500):
        Q = Quaternion.from_components(*rng.normal(size=4))
        Q = Q / Q.norm()
        lams = eig2(ql.strength_matrix(Q)).values
        for sign in (1, -1):
            br = ql.solve_delta_left(Q, consts=c, eig_sign=sign)
            assert min(abs(br.K + c.m_over_hbar2 * lam) for lam in lams) < 1e-13
            assert math.isclose(abs(br.K), c.m_over_hbar2, rel_tol=1e-13)
            assert abs(ql.sandwich_of(br, Q).z1) < 1e-14
            state = ql.delta_state(br, Q)
            assert jump_residual(state, c) < 1e-13


def test_delta_with_compatible_background_solves_the_equation():
    U = Quaternion(0.2 - 0.4j, 0.5 + 0.1j)
    E = 0.3 + 1j
    branch = ql.solve_autonomous_left(E, U)
    q = -branch.K
    Q = similar_to(branch.amplitude, q)
    br = ql.solve_delta_left(Q, U, eig_sign=1 if q.imag >= 0 else -1)
    assert abs(br.E - E) < 1e-13
    assert br.eigen_residual < 1e-14
    rep = pde_residual(ql.delta_state(br, Q), x_max=3.0)
    assert rep.pde_residual_max < 1e-6 and rep.jump_residual < 1e-14


def test_delta_with_incompatible_background_reports_residual():
    br = ql.solve_delta_left(Quaternion(-1.5, 0.4 + 0.2j))
    assert br.eigen_residual > 0.1


def test_confined_energy():
    assert math.isclose(ql.confined_energy_left(Quaternion(-2.0), Quaternion(0, 3)) ** 2, 13.0)
    assert ql.confined_energy_left(Quaternion(-2.0), Quaternion(0, 3)) < 0
    # complex limit
    for q0, v0 in ((-2.0, 0.0), (-1.0, 0.7), (-3.0, -1.0)):
        expected = -0.5 * q0**2 + v0
        assert math.isclose(ql.confined_energy_left(Quaternion(q0), Quaternion(v0)), expected)
    with pytest.raises(NotConfining):
        ql.confined_energy_left(Quaternion(-2.0, 0.5), Quaternion())
    assert ql.printed_confined_energy_squared(Quaternion(-2.0), Quaternion(0, 3)) == 10.0


def test_confined_state_solves_the_equation():
    Q, U = Quaternion(-2.0), Quaternion(0.5, 3.0)
    br = ql.solve_delta_left(Q, U)
    assert math.isclose(br.E.imag, ql.confined_energy_left(Q, U))
    assert br.eigen_residual < 1e-14
    rep = pde_residual(ql.delta_state(br, Q), x_max=5.0)
    assert rep.pde_residual_max < 1e-6 and rep.jump_residual < 1e-13


def test_scattering_left_example():
    Q = Quaternion(0, 2j)
    U = Quaternion(0, math.sqrt(5))
    sol = ql.solve_scattering_left(2j, Q, U, eig_sign=-1, E=3j)
    R, T = solve_matching_direct(2j, -2j)
    assert abs(sol.R - R) < 1e-15 and abs(sol.T - T) < 1e-15
    assert sol.T == 1 + sol.R
    # q = +2i with K = 2i puts 1 + g exactly on zero
    with pytest.raises(SingularMatching):
        ql.solve_scattering_left(2j, Q, U, eig_sign=1, E=3j)
    with pytest.raises(SingularMatching):
        solve_matching_direct(2j, 2j)


def test_scattering_left_reductions():
    U = Quaternion(0, 1.0)
    sol = ql.solve_scattering_left(1.5j, Quaternion(0.7 + 0.3j), U, eig_sign=1)
    ref = cd.solve_scattering(1.5j, cd.ComplexPotential(0.7 + 0.3j))
    assert sol.R == ref.R and sol.T == ref.T
    zero = ql.solve_scattering_left(1.5j, Quaternion(), U)
    assert zero.R == 0 and zero.T == 1


def test_scattering_left_requires_stationarity():
    U = Quaternion(0, 1.0)
    with pytest.raises(NotStationary):
        ql.solve_scattering_left(0.1 + 1.5j, Quaternion(1.0), U)
    with pytest.raises(NotStationary):
        ql.solve_scattering_left(1.5j, Quaternion(1.0), Quaternion(0.2j, 1.0))
    with pytest.raises(NotStationary):
        ql.solve_scattering_left(1.5j, Quaternion(1.0), U, E=5j)


def test_scattering_state_with_similar_strength():
    U, E = Quaternion(0.3, 0.4 + 0.2j), 2j
    stat = ql.solve_autonomous_left(E, U, eig_sign=-1)
    Q = similar_to(stat.amplitude, 0.6 + 0.3j)
    state = ql.scattering_state_left(stat.K, Q, U, eig_sign=1, E=E)
    rep = pde_residual(state, x_max=10.0)
    assert rep.pde_residual_max < 1e-6 and rep.jump_residual < 1e-13
