"""Left quaternionic wave equation ``i hbar dPsi/dt = H Psi``.

With ``Psi = (A0 + A1 j) exp(K x - E t / hbar)`` and ``U = U0 + U1 j`` the
amplitude vector ``(A0, conj A1)`` is an eigenvector of::

    [[U0 + iE,   -U1        ],
     [conj U1,   conj U0 - iE]]

with eigenvalue ``hbar^2 K^2 / 2m``.  The eigenvalues are
``V0 +/- sqrt(-alpha - i beta)`` with ``alpha = (E0 + V1)^2 - E1^2 + |U1|^2``
and ``beta = 2 E1 (E0 + V1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .algebra import (NATURAL, PhysicalConstants, Quaternion, check_sign, eigen_ratio, eigen_residual, is_zero,
                      quat_sandwich, unit_eigen_amplitude)
from .complex_delta import (
    ComplexPotential,
    ScatteringSolution,
    StationarityClass,
    k_from_eigenvalue,
    solve_scattering,
)
from .errors import DegenerateCoupling, NotConfining, NotStationary, ZeroStrength
from .quat_right import evolution_matrix_right
from .wavefunction import Mode, PiecewiseState


@dataclass(frozen=True)
class QuaternionPotential:
    Q: Quaternion = Quaternion()
    U: Quaternion = Quaternion()

    def __post_init__(self):
        object.__setattr__(self, "Q", Quaternion.coerce(self.Q))
        object.__setattr__(self, "U", Quaternion.coerce(self.U))


@dataclass(frozen=True)
class QuatBranch:
    K: complex
    E: complex
    A0: complex
    A1: complex
    eig_sign: int
    alpha: float
    beta: float
    U: Quaternion = Quaternion()
    eigen_residual: float = 0.0

    @property
    def amplitude(self) -> Quaternion:
        return Quaternion(self.A0, self.A1)

    def as_state(self) -> PiecewiseState:
        return PiecewiseState.uniform(Mode(self.amplitude, self.K, self.E), "left", self.U)


def evolution_matrix(E: complex, U: Quaternion) -> np.ndarray:
    U = Quaternion.coerce(U)
    E = complex(E)
    return np.array([[U.z0 + 1j * E, -U.z1],
                     [U.z1.conjugate(), U.z0.conjugate() - 1j * E]])


def alpha_beta(E: complex, U: Quaternion) -> tuple[float, float]:
    U = Quaternion.coerce(U)
    E = complex(E)
    shift = E.real + U.z0.imag
    return shift**2 - E.imag**2 + abs(U.z1) ** 2, 2.0 * E.imag * shift


def _root_parts(alpha: float, beta: float) -> tuple[float, float]:
    """``sqrt((r - alpha)/2)`` and ``sqrt((r + alpha)/2)`` with ``r = hypot(alpha, beta)``.

    The smaller one is recovered from their product ``|beta| / 2``.
    """
    r = math.hypot(alpha, beta)
    if r == 0.0:
        return 0.0, 0.0
    if alpha >= 0:
        y = math.sqrt((r + alpha) / 2.0)
        return abs(beta) / (2.0 * y), y
    x = math.sqrt((r - alpha) / 2.0)
    return x, abs(beta) / (2.0 * x)


def eigenvalue(E: complex, U: Quaternion, eig_sign: int) -> complex:
    """``hbar^2 K^2 / 2m`` for the chosen sign: ``V0 +/- sqrt(-alpha - i beta)``."""
    U = Quaternion.coerce(U)
    alpha, beta = alpha_beta(E, U)
    x, y = _root_parts(alpha, beta)
    # principal root of -alpha - i beta has imaginary part of sign -beta (+ for beta = 0)
    root = complex(x, -y if beta > 0 else y)
    return U.z0.real + eig_sign * root


def k_squares(E: complex, U: Quaternion, eig_sign: int, consts: PhysicalConstants = NATURAL) -> tuple[float, float]:
    """K0^2 and K1^2 from the closed forms, evaluated literally."""
    U = Quaternion.coerce(U)
    alpha, beta = alpha_beta(E, U)
    r = math.sqrt(alpha**2 + beta**2)
    x = math.sqrt((r - alpha) / 2.0)
    y2 = (r + alpha) / 2.0
    re = U.z0.real + eig_sign * x
    outer = math.sqrt(re**2 + y2)
    s = consts.m_over_hbar2
    return s * (re + outer), s * (-re + outer)


def solve_autonomous_left(E: complex, U: Quaternion, A0: complex | None = None,
                          consts: PhysicalConstants = NATURAL, eig_sign: int = 1) -> QuatBranch:
    """Plane-wave branch of the left equation for given E and background U.

    If ``A0`` is None the amplitude is normalized to ``|A0|^2 + |A1|^2 = 1``
    with A0 real positive; otherwise ``A1 = c conj(A0)`` with the eigenvector
    ratio ``c``.
    """
    E = complex(E)
    U = Quaternion.coerce(U)
    check_sign(eig_sign)
    if U.z1 == 0:
        raise DegenerateCoupling("U1 = 0: use the complex solver")
    alpha, beta = alpha_beta(E, U)
    lam = eigenvalue(E, U, eig_sign)
    K = k_from_eigenvalue(lam, consts)
    M = evolution_matrix(E, U)
    if A0 is None:
        A0, A1 = unit_eigen_amplitude(M, lam)
    else:
        # conj(A1) = ratio A0
        A0 = complex(A0)
        A1 = (eigen_ratio(M, lam) * A0).conjugate()
    lam_k = K * K / (2.0 * consts.m_over_hbar2)
    return QuatBranch(K, E, A0, A1, eig_sign, alpha, beta, U, eigen_residual(M, A0, A1, lam_k))


def complex_limit_sign(E: complex, U: Quaternion) -> int:
    """The eig_sign whose eigenvalue tends to ``U0 + iE`` as ``U1 -> 0``."""
    U = Quaternion.coerce(U)
    target = U.z0 + 1j * complex(E)
    return min((1, -1), key=lambda s: abs(eigenvalue(E, U, s) - target))


def printed_amplitude_ratio(E: complex, U: Quaternion, eig_sign: int) -> complex:
    """``A1 / conj(A0)`` as printed alongside the closed forms for K.

    It equals the eigenvector ratio only for ``beta < 0`` and with the sign
    opposite to the one used for K; kept as a diagnostic.
    """
    U = Quaternion.coerce(U)
    E = complex(E)
    alpha, beta = alpha_beta(E, U)
    r = math.hypot(alpha, beta)
    x = math.sqrt((r - alpha) / 2.0)
    y = math.sqrt((r + alpha) / 2.0)
    shift = E.real + U.z0.imag
    return (-E.imag + eig_sign * x - 1j * (shift + eig_sign * y)) / U.z1.conjugate()


def classify_stationarity_left(E: complex, U: Quaternion) -> StationarityClass:
    E = complex(E)
    U = Quaternion.coerce(U)
    V0, V1 = U.z0.real, U.z0.imag
    u2 = abs(U.z1) ** 2
    scale = (E.real, E.imag, V0, V1, abs(U.z1))
    if not (is_zero(E.real, *scale) and is_zero(V1, *scale)):
        return StationarityClass.MIXED
    sq_scale = max(E.imag**2, V0**2, u2)
    margin = E.imag**2 - V0**2 - u2
    if is_zero(margin, sq_scale):
        return StationarityClass.DEGENERATE
    if margin > 0:
        return StationarityClass.PURE_STATIONARY
    d = E.imag**2 - u2
    if d >= 0 and V0 - math.sqrt(d) > 0:
        return StationarityClass.PURE_NON_OSCILLATORY
    return StationarityClass.MIXED


def stationary_k1_squared(E1: float, V0: float, u1_abs: float, consts: PhysicalConstants = NATURAL) -> float:
    """K1^2 = (2m/hbar^2)(sqrt(E1^2 - |U1|^2) - V0) for the pure stationary case."""
    return 2.0 * consts.m_over_hbar2 * (math.sqrt(E1**2 - u1_abs**2) - V0)


def delta_eigenvalue(Q: Quaternion, eig_sign: int) -> complex:
    """``Re[Q] +/- |Im[Q]| i``, the eigenvalues of the strength matrix."""
    return complex(Q.real, eig_sign * Q.imag_norm)


def strength_matrix(Q: Quaternion) -> np.ndarray:
    Q = Quaternion.coerce(Q)
    return np.array([[Q.z0, -Q.z1], [Q.z1.conjugate(), Q.z0.conjugate()]])


def _confined_energy(lam: float, U: Quaternion) -> complex:
    V0 = U.z0.real
    E1 = math.copysign(math.sqrt((V0 - lam) ** 2 + abs(U.z1) ** 2), V0 - lam)
    return complex(-U.z0.imag, E1)


def _energy_from_rows(M0: np.ndarray, A0: complex, A1: complex, lam: complex, right: bool) -> complex:
    """Solve the better-conditioned row of ``(M0 + iE D) v = lam v`` for E.

    ``M0`` is the matrix with E = 0; D = diag(1, -1) for the left equation
    and the identity for the right one.
    """
    v0, v1 = A0, A1.conjugate()
    if abs(v0) >= abs(v1):
        # (M0[0,0] + iE) v0 + M0[0,1] v1 = lam v0
        return (lam * v0 - M0[0, 0] * v0 - M0[0, 1] * v1) / (1j * v0)
    sign = 1.0 if right else -1.0
    return (lam * v1 - M0[1, 0] * v0 - M0[1, 1] * v1) / (sign * 1j * v1)


def delta_amplitudes(Q: Quaternion, U: Quaternion, eig_sign: int, consts: PhysicalConstants = NATURAL,
                     lam_confined: float | None = None) -> tuple[complex, complex]:
    """Unit amplitude (A0, A1) with ``Q A = A (Re Q +/- |Im Q| i)``.

    For ``Q1 != 0`` this is ``conj(A1) = (Q0 + hbar^2 K / m) A0 / Q1``.  For a
    complex Q the eigenvectors are the basis vectors; for a real Q every
    amplitude qualifies and the one compatible with the background at the
    confined eigenvalue ``lam_confined`` is returned.
    """
    Q = Quaternion.coerce(Q)
    U = Quaternion.coerce(U)
    mu = delta_eigenvalue(Q, eig_sign)
    if Q.z1 != 0:
        return unit_eigen_amplitude(strength_matrix(Q), mu)
    if Q.z0.imag != 0:
        return (1 + 0j, 0j) if math.copysign(1, Q.z0.imag) == eig_sign else (0j, 1 + 0j)
    if U.z1 == 0 or lam_confined is None:
        return 1 + 0j, 0j
    E = _confined_energy(lam_confined, U)
    return unit_eigen_amplitude(evolution_matrix(E, U), lam_confined)


def solve_delta_left(Q: Quaternion, U: Quaternion = Quaternion(), consts: PhysicalConstants = NATURAL,
                     eig_sign: int = 1) -> QuatBranch:
    """Delta-potential branch ``K = -(m/hbar^2)(Re Q +/- |Im Q| i)``.

    The amplitude satisfies the jump condition exactly.  E is fixed by the
    first row of the evolution matrix; ``eigen_residual`` measures how far the
    amplitude is from an eigenvector of that matrix (zero for a real Q, where
    the confined energy is used, and in general nonzero otherwise).
    """
    return _solve_delta(Q, U, consts, eig_sign, right=False)


def _solve_delta(Q, U, consts, eig_sign, right: bool) -> QuatBranch:
    Q = Quaternion.coerce(Q)
    U = Quaternion.coerce(U)
    check_sign(eig_sign)
    if Q.norm_sq() == 0.0:
        raise ZeroStrength("Q = 0")
    K = -consts.m_over_hbar2 * delta_eigenvalue(Q, eig_sign)
    lam = K * K / (2.0 * consts.m_over_hbar2)
    confined = Q.z1 == 0 and Q.z0.imag == 0 and not right
    A0, A1 = delta_amplitudes(Q, U, eig_sign, consts, lam.real if confined else None)
    E0_matrix = evolution_matrix(0j, U) if not right else evolution_matrix_right(0j, U)
    if confined:
        E = _confined_energy(lam.real, U)
    else:
        E = complex(_energy_from_rows(E0_matrix, A0, A1, lam, right))
    M = evolution_matrix_right(E, U) if right else evolution_matrix(E, U)
    alpha, beta = alpha_beta(E, U)
    return QuatBranch(K, E, A0, A1, eig_sign, alpha, beta, U, eigen_residual(M, A0, A1, lam))


def delta_state(branch: QuatBranch, Q: Quaternion, form: str = "left") -> PiecewiseState:
    """``A exp(K x)`` for x < 0 and ``A exp(-K x)`` for x > 0."""
    A = branch.amplitude
    left = Mode(A, branch.K, branch.E)
    right = Mode(A, -branch.K, branch.E)
    return PiecewiseState((left,), (right,), form, branch.U, Q)


def sandwich_of(branch: QuatBranch, Q: Quaternion) -> Quaternion:
    return quat_sandwich(branch.amplitude, Q)


def confined_energy_left(Q: Quaternion, U: Quaternion, consts: PhysicalConstants = NATURAL) -> float:
    """E1 of the confined state of a real strength, from K0 = -(m/hbar^2) Re Q.

    ``E1^2 = (V0 - hbar^2 K0^2 / 2m)^2 + |U1|^2`` with the sign of
    ``V0 - hbar^2 K0^2 / 2m`` (the negative root for an attractive well).
    """
    Q = Quaternion.coerce(Q)
    U = Quaternion.coerce(U)
    if not is_zero(Q.imag_norm, Q.real, Q.imag_norm):
        raise NotConfining(f"|Im Q| = {Q.imag_norm}")
    K0 = -consts.m_over_hbar2 * Q.real
    return _confined_energy(consts.kinetic * K0**2, U).imag


def printed_confined_energy_squared(Q: Quaternion, U: Quaternion, consts: PhysicalConstants = NATURAL) -> float:
    """The confined-state E1^2 with Re[Q] entering unsquared, kept as a diagnostic."""
    Q = Quaternion.coerce(Q)
    U = Quaternion.coerce(U)
    return (U.z0.real - 0.5 * consts.m_over_hbar2 * Q.real) ** 2 + abs(U.z1) ** 2


def effective_strength(Q: Quaternion, eig_sign: int = 1) -> complex:
    return delta_eigenvalue(Quaternion.coerce(Q), eig_sign)


def solve_scattering_left(K: complex, Q: Quaternion, U: Quaternion, consts: PhysicalConstants = NATURAL,
                          eig_sign: int = 1, E: complex | None = None) -> ScatteringSolution:
    """Scattering off a quaternionic delta in a pure stationary background.

    The matching reduces to the complex problem with strength
    ``q = Re[Q] +/- |Im[Q]| i``.  Without ``E`` the incident energy is taken
    as ``i E1`` with ``E1 = +sqrt((V0 - lam)^2 + |U1|^2)``, ``lam = hbar^2 K^2 / 2m``.
    """
    K = complex(K)
    Q = Quaternion.coerce(Q)
    U = Quaternion.coerce(U)
    check_sign(eig_sign)
    V0, V1 = U.z0.real, U.z0.imag
    if not is_zero(K.real, K.real, K.imag) or not is_zero(V1, V0, V1, abs(U.z1)):
        raise NotStationary(f"K0 = {K.real}, V1 = {V1}: stationary scattering needs both zero")
    lam = -consts.kinetic * K.imag**2
    if E is None:
        E = 1j * math.sqrt((V0 - lam) ** 2 + abs(U.z1) ** 2)
    E = complex(E)
    if classify_stationarity_left(E, U) is not StationarityClass.PURE_STATIONARY:
        raise NotStationary(f"E = {E}, U = {U} violate the stationary conditions")
    expected = stationary_k1_squared(E.imag, V0, abs(U.z1), consts)
    if not math.isclose(expected, K.imag**2, rel_tol=1e-10, abs_tol=1e-12):
        raise NotStationary(f"K1^2 = {K.imag**2} but the stationary branch requires {expected}")
    # R and T depend on K and q only; E and calE0 are those of the quaternionic branch
    sol = solve_scattering(K, ComplexPotential(effective_strength(Q, eig_sign)), consts)
    return replace(sol, E=E, calE0=-E.real)


def scattering_state_left(K: complex, Q: Quaternion, U: Quaternion, consts: PhysicalConstants = NATURAL,
                          eig_sign: int = 1, E: complex | None = None,
                          amplitude: Quaternion | None = None) -> PiecewiseState:
    """The quaternionic scattering wave function ``A (incident + R reflected)``, ``A T transmitted``.

    By default ``A`` is the strength eigen-amplitude, which makes the jump
    exact; the bulk equation also holds when ``A`` is an eigenvector of the
    evolution matrix, e.g. for ``Q = A q A^{-1}``.
    """
    sol = solve_scattering_left(K, Q, U, consts, eig_sign, E)
    if amplitude is None:
        amplitude = Quaternion(*delta_amplitudes(Q, U, eig_sign, consts))
    return sol.as_state(amplitude, "left", background=U, strength=Q)
