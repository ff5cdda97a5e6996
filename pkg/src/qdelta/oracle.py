"""Brute-force checks that do not share code paths with the closed forms.

* :func:`eig2` solves 2x2 eigenproblems from the characteristic polynomial.
* :func:`pde_residual` plugs a piecewise state into the wave equation with a
  fourth-order finite-difference Laplacian.
* :func:`jump_residual` checks continuity and the derivative jump at 0.
* :func:`solve_matching_direct` solves the scattering matching system as a
  linear system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import NATURAL, PhysicalConstants, symplectic_mul
from .errors import DiscontinuousAtZero, GridTooCoarse, SingularMatching
from .wavefunction import PiecewiseState, evaluate

STENCIL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
STENCIL_ORDER = 4
CONTINUITY_RTOL = 1e-12


@dataclass(frozen=True)
class Eig2Result:
    values: tuple[complex, ...]
    vectors: tuple[np.ndarray, ...]
    degenerate: bool

    def pairs(self):
        return list(zip(self.values, self.vectors))


@dataclass(frozen=True)
class ResidualReport:
    pde_residual_max: float
    pde_residual_l2: float
    jump_residual: float
    grid_spacing: float
    stencil_order: int = STENCIL_ORDER
    collar: float = 0.0


def _null_vector(M: np.ndarray, lam: complex) -> np.ndarray:
    a, b = M[0, 0] - lam, M[0, 1]
    c, d = M[1, 0], M[1, 1] - lam
    # each row (p, q) is annihilated by (q, -p); take the larger row
    r0 = np.array([b, -a])
    r1 = np.array([d, -c])
    v = r0 if np.linalg.norm(r0) >= np.linalg.norm(r1) else r1
    n = np.linalg.norm(v)
    if n == 0.0:
        return np.array([1.0 + 0j, 0j])
    return v / n


def eig2(M) -> Eig2Result:
    """Eigenpairs of a complex 2x2 matrix.

    Roots use ``lam1 = tr/2 + disc`` with the sign that avoids cancellation
    and ``lam2 = det / lam1``.  Coincident eigenvalues set ``degenerate``; a
    defective matrix then yields a single pair.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2) or not np.all(np.isfinite(M)):
        raise ValueError("eig2 needs a finite 2x2 matrix")
    half = 0.5 * (M[0, 0] + M[1, 1])
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = np.sqrt(0.25 * (M[0, 0] - M[1, 1]) ** 2 + M[0, 1] * M[1, 0])
    if (half.conjugate() * disc).real < 0:
        disc = -disc
    lam1 = half + disc
    lam2 = det / lam1 if lam1 != 0 else half - disc
    scale = max(np.abs(M).max(), 1e-300)
    if abs(lam1 - lam2) > 1e-12 * scale:
        return Eig2Result((complex(lam1), complex(lam2)), (_null_vector(M, lam1), _null_vector(M, lam2)), False)
    lam = complex(half)
    if np.abs(M - lam * np.eye(2)).max() <= 1e-12 * scale:
        return Eig2Result((lam, lam), (np.array([1.0 + 0j, 0j]), np.array([0j, 1.0 + 0j])), True)
    return Eig2Result((lam,), (_null_vector(M, lam),), True)


def _time_side(form: str):
    """How ``i hbar dPsi/dt`` (or ``hbar dPsi/dt i``) acts on symplectic parts."""
    if form == "right":
        return lambda z0, z1: (1j * z0, -1j * z1)
    return lambda z0, z1: (1j * z0, 1j * z1)


def _side_residual(modes, x, h, t, state: PiecewiseState, consts: PhysicalConstants):
    hbar = consts.hbar
    lap0 = np.zeros(x.shape, dtype=complex)
    lap1 = np.zeros(x.shape, dtype=complex)
    for w, offset in zip(STENCIL, (-2, -1, 0, 1, 2)):
        p0, p1 = evaluate(modes, x + offset * h, t, hbar)
        lap0 += w * p0
        lap1 += w * p1
    lap0 /= h * h
    lap1 /= h * h
    p0, p1 = evaluate(modes, x, t, hbar)
    # analytic time derivative, scaled by hbar
    d0, d1 = evaluate([m.d_dt(hbar).scaled(hbar) for m in modes], x, t, hbar)
    t0, t1 = _time_side(state.form)(d0, d1)
    U = state.background
    u0, u1 = symplectic_mul(U.z0, U.z1, p0, p1)
    kin = consts.kinetic
    return t0 + kin * lap0 - u0, t1 + kin * lap1 - u1


def pde_residual(state, x_max: float = 10.0, h: float = 1e-3, t: float = 0.0,
                 consts: PhysicalConstants = NATURAL, collar: float | None = None,
                 with_jump: bool = True) -> ResidualReport:
    """Residual of the wave equation on ``collar <= |x| <= x_max``.

    The equation form is taken from ``state.form``; the Laplacian is the
    five-point fourth-order stencil and the time derivative is analytic.
    """
    if not isinstance(state, PiecewiseState):
        state = state.as_state()
    if h <= 0 or x_max <= 0:
        raise ValueError("h and x_max must be positive")
    eps = 10.0 * h if collar is None else collar
    if eps <= 2.0 * h:
        raise GridTooCoarse(f"collar {eps} must exceed 2h = {2 * h}")
    if eps >= x_max:
        raise ValueError("collar leaves no grid")
    n = int(math.floor((x_max - eps) / h)) + 1
    grid = eps + h * np.arange(n)
    sq_sum = 0.0
    worst = 0.0
    for modes, x in ((state.right, grid), (state.left, -grid[::-1])):
        r0, r1 = _side_residual(modes, x, h, t, state, consts)
        mag2 = np.abs(r0) ** 2 + np.abs(r1) ** 2
        worst = max(worst, float(np.sqrt(mag2.max())))
        sq_sum += float(mag2.sum())
    jump = jump_residual(state, consts, t) if with_jump else math.nan
    return ResidualReport(worst, math.sqrt(sq_sum * h), jump, h, STENCIL_ORDER, eps)


def default_extent(state) -> tuple[float, float]:
    """A grid half-width and a coarse spacing suited to the state's wave numbers.

    The half-width keeps growing exponentials below ``e^4`` (at most 10); the
    spacing ``0.2/|K|max`` keeps truncation error well above roundoff over
    three halvings.
    """
    if not isinstance(state, PiecewiseState):
        state = state.as_state()
    ks = [m.K for m in state.all_modes()] or [0j]
    grow = max(max(abs(k.real) for k in ks), 0.4)
    return min(10.0, 4.0 / grow), 0.2 / max(max(abs(k) for k in ks), 1.0)


def convergence_study(state, h0: float, x_max: float = 10.0, halvings: int = 3, t: float = 0.0,
                      consts: PhysicalConstants = NATURAL, collar: float | None = None):
    """Max residuals at ``h0, h0/2, ...`` and the least-squares log-log slope.

    The collar is fixed (default ``10 h0``) so every level sees the same region.
    """
    eps = 10.0 * h0 if collar is None else collar
    hs = [h0 / 2**k for k in range(halvings + 1)]
    res = [pde_residual(state, x_max, h, t, consts, eps, with_jump=False).pde_residual_max for h in hs]
    slope = float(np.polyfit(np.log(hs), np.log(res), 1)[0])
    return hs, res, slope


def jump_residual(state, consts: PhysicalConstants = NATURAL, t: float = 0.0) -> float:
    """``|(hbar^2/2m)(Psi'(0+) - Psi'(0-)) - Q Psi(0)|`` from analytic one-sided derivatives."""
    if not isinstance(state, PiecewiseState):
        state = state.as_state()
    hbar = consts.hbar
    zero = np.zeros(1)
    l0, l1 = evaluate(state.left, zero, t, hbar)
    r0, r1 = evaluate(state.right, zero, t, hbar)
    gap = math.hypot(abs(l0[0] - r0[0]), abs(l1[0] - r1[0]))
    size = max(math.hypot(abs(l0[0]), abs(l1[0])), math.hypot(abs(r0[0]), abs(r1[0])))
    if gap > CONTINUITY_RTOL * max(size, 1.0):
        raise DiscontinuousAtZero(f"|Psi(0-) - Psi(0+)| = {gap}")
    dl0, dl1 = evaluate([m.d_dx() for m in state.left], zero, t, hbar)
    dr0, dr1 = evaluate([m.d_dx() for m in state.right], zero, t, hbar)
    Q = state.strength
    q0, q1 = symplectic_mul(Q.z0, Q.z1, r0[0], r1[0])
    kin = consts.kinetic
    j0 = kin * (dr0[0] - dl0[0]) - q0
    j1 = kin * (dr1[0] - dl1[0]) - q1
    return math.hypot(abs(j0), abs(j1))


def solve_matching_direct(K: complex, strength: complex, consts: PhysicalConstants = NATURAL) -> tuple[complex, complex]:
    """R and T from continuity and the derivative jump as a 2x2 linear system.

    Incident ``exp(K x)``, reflected ``R exp(conj(K) x)``, transmitted
    ``T exp(-conj(K) x)``.
    """
    K = complex(K)
    Kc = K.conjugate()
    c = 2.0 * consts.m_over_hbar2 * complex(strength)
    A = np.array([[1.0, -1.0], [Kc, Kc + c]], dtype=complex)
    b = np.array([-1.0, -K], dtype=complex)
    if abs(np.linalg.det(A)) <= 1e-14 * max(1.0, np.abs(A).max()) ** 2:
        raise SingularMatching(f"matching matrix is singular for K={K}, strength={strength}")
    R, T = np.linalg.solve(A, b)
    return complex(R), complex(T)
