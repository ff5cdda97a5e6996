"""Right quaternionic wave equation ``hbar (dPsi/dt) i = H Psi``.

The amplitude vector ``(A0, conj A1)`` is an eigenvector of::

    [[U0 + iE,   -U1        ],
     [conj U1,   conj U0 + iE]]

with eigenvalue ``hbar^2 K^2 / 2m``.  The matrix is ``iE`` plus the complex
representation of ``U``, so its eigenvalues are
``(V0 - E1) + i (E0 +/- sqrt(V1^2 + |U1|^2))``.  Unless ``|E0|`` equals the
square root, both eigenvalues have a nonzero imaginary part and no branch is
purely oscillating or purely non-oscillating.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import NATURAL, PhysicalConstants, Quaternion, check_sign, eigen_residual, is_zero, unit_eigen_amplitude
from .complex_delta import k_from_eigenvalue
from .wavefunction import Mode, PiecewiseState


@dataclass(frozen=True)
class RightBranch:
    K: complex
    E: complex
    A0: complex
    A1: complex
    eig_sign: int
    U: Quaternion = Quaternion()
    eigen_residual: float = 0.0

    @property
    def amplitude(self) -> Quaternion:
        return Quaternion(self.A0, self.A1)

    def as_state(self) -> PiecewiseState:
        return PiecewiseState.uniform(Mode(self.amplitude, self.K, self.E), "right", self.U)


def evolution_matrix_right(E: complex, U: Quaternion) -> np.ndarray:
    U = Quaternion.coerce(U)
    E = complex(E)
    return np.array([[U.z0 + 1j * E, -U.z1],
                     [U.z1.conjugate(), U.z0.conjugate() + 1j * E]])


def coupling(U: Quaternion) -> float:
    """``sqrt(V1^2 + |U1|^2)``, the size of the self-interaction shift."""
    U = Quaternion.coerce(U)
    return math.hypot(U.z0.imag, abs(U.z1))


def eigenvalue_right(E: complex, U: Quaternion, eig_sign: int) -> complex:
    E = complex(E)
    U = Quaternion.coerce(U)
    return complex(U.z0.real - E.imag, E.real + eig_sign * coupling(U))


def _eigenvector(E: complex, U: Quaternion, lam: complex, eig_sign: int) -> tuple[complex, complex]:
    if U.z1 == 0:
        # diagonal matrix: U0 + iE sits on the branch with the sign of V1
        if U.z0.imag == 0 or math.copysign(1, U.z0.imag) == eig_sign:
            return 1 + 0j, 0j
        return 0j, 1 + 0j
    return unit_eigen_amplitude(evolution_matrix_right(E, U), lam)


def solve_autonomous_right(E: complex, U: Quaternion, consts: PhysicalConstants = NATURAL,
                           eig_sign: int = 1) -> RightBranch:
    """Plane-wave branch of the right equation; amplitude normalized to unit norm."""
    E = complex(E)
    U = Quaternion.coerce(U)
    check_sign(eig_sign)
    lam = eigenvalue_right(E, U, eig_sign)
    K = k_from_eigenvalue(lam, consts)
    A0, A1 = _eigenvector(E, U, lam, eig_sign)
    lam_k = K * K / (2.0 * consts.m_over_hbar2)
    return RightBranch(K, E, A0, A1, eig_sign, U, eigen_residual(evolution_matrix_right(E, U), A0, A1, lam_k))


def printed_k_squares(E: complex, U: Quaternion, eig_sign: int, inner_sign: int,
                      consts: PhysicalConstants = NATURAL) -> tuple[float, float]:
    """K0^2 and K1^2 in the printed form, with ``E0 +/- sqrt(V1^2 + |U1|^2)`` unsquared under the root.

    Returns NaN where the printed radicand is negative.  Diagnostic only.
    """
    E = complex(E)
    U = Quaternion.coerce(U)
    d = U.z0.real - E.imag
    radicand = d**2 + E.real + inner_sign * coupling(U)
    if radicand < 0:
        return math.nan, math.nan
    root = math.sqrt(radicand)
    s = consts.m_over_hbar2
    return s * (d + eig_sign * root), s * (-d + eig_sign * root)


def derived_k_squares(E: complex, U: Quaternion, eig_sign: int, consts: PhysicalConstants = NATURAL) -> tuple[float, float]:
    """K0^2 and K1^2 from the exact eigenvalue ``lam``: ``(m/hbar^2)(|lam| +/- Re lam)``."""
    lam = eigenvalue_right(E, U, eig_sign)
    s = consts.m_over_hbar2
    return s * (abs(lam) + lam.real), s * (abs(lam) - lam.real)


def pure_mode_obstruction(E: complex, U: Quaternion) -> bool:
    """True when neither ``E0 + sqrt(...)`` nor ``E0 - sqrt(...)`` vanishes."""
    E = complex(E)
    s = coupling(U)
    return not is_zero(abs(E.real) - s, E.real, s)


def right_operator_apply(kind: str, branch: RightBranch, consts: PhysicalConstants = NATURAL) -> Quaternion:
    """Coefficient ``c`` with ``O Psi = Psi c`` for a plane-wave branch.

    ``E Psi = hbar (dPsi/dt) i`` gives ``c = -i E`` and
    ``p Psi = -hbar (dPsi/dx) i`` gives ``c = -i hbar K``; both act from the right.
    """
    if kind == "energy":
        return Quaternion(-1j * branch.E)
    if kind == "momentum":
        return Quaternion(-1j * consts.hbar * branch.K)
    if kind == "momentum_sq":
        c = -1j * consts.hbar * branch.K
        return Quaternion(c * c)
    raise ValueError(f"unknown operator kind {kind!r}")


def solve_delta_right(Q: Quaternion, U: Quaternion = Quaternion(), consts: PhysicalConstants = NATURAL,
                      eig_sign: int = 1):
    """Delta branch of the right equation.

    The jump condition is the same as for the left equation, so K and the
    amplitude come from the shared strength eigenproblem; E follows from the
    right evolution matrix.
    """
    from .quat_left import _solve_delta

    return _solve_delta(Q, U, consts, eig_sign, right=True)
