"""Expectation values in the real Hilbert space.

For an operator O the expectation value is
``(1/2) int [Psi^dagger O Psi + (O Psi)^dagger Psi] dx``, which for
quaternions equals ``int Re(conj(Psi) O Psi) dx``.  Closed forms for single
plane-wave branches are evaluated with exact exponential integrals; the
quadrature route evaluates the definition pointwise and is the oracle for them.

Only the region away from the delta contributes: the potential is the
constant background there.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .algebra import NATURAL, PhysicalConstants, symplectic_mul
from .errors import DivergentNorm, QuadratureFailure
from .wavefunction import Mode, PiecewiseState, apply_operator, evaluate, potential_modes

OPERATORS = ("energy", "momentum", "momentum_sq", "potential")


@dataclass(frozen=True)
class DensityPair:
    rho_coeff: float
    varrho_coeff: float


@dataclass(frozen=True)
class ExpectationReport:
    energy: float
    momentum: float
    momentum_sq: float
    potential: float
    norm_rho: float
    norm_varrho: float
    window: tuple[float, float, float]
    conservation_residual: float

    @property
    def kinetic(self) -> float:
        """<p^2> in units where it still needs dividing by 2m."""
        return self.momentum_sq


def density_pair(mode: Mode, form: str) -> DensityPair:
    """Amplitude prefactors of the two densities for one plane-wave branch."""
    A = mode.amplitude
    a0, a1 = abs(A.z0) ** 2, abs(A.z1) ** 2
    if form == "left":
        return DensityPair(a0 - a1, (a0 + a1) ** 2)
    return DensityPair(a0 + a1, a0 + a1)


def exp_integral(rate: float, lo: float, hi: float) -> float:
    """``int_lo^hi exp(rate x) dx`` including infinite limits."""
    if hi <= lo:
        return 0.0
    if rate == 0.0:
        if math.isinf(lo) or math.isinf(hi):
            raise DivergentNorm("constant density on an unbounded window")
        return hi - lo
    if (rate > 0 and math.isinf(hi)) or (rate < 0 and math.isinf(lo)):
        raise DivergentNorm(f"density exp({rate} x) diverges on [{lo}, {hi}]")
    if math.isinf(lo):
        return math.exp(rate * hi) / rate
    if math.isinf(hi):
        return -math.exp(rate * lo) / rate
    return math.exp(rate * lo) * math.expm1(rate * (hi - lo)) / rate


def _segments(state: PiecewiseState, window):
    lo, hi = window
    if lo >= hi:
        raise ValueError(f"empty window {window}")
    segs = []
    if lo < 0:
        segs.append((state.left, lo, min(hi, 0.0)))
    if hi > 0:
        segs.append((state.right, max(lo, 0.0), hi))
    return segs


def expectation_closed_form(state, window=(-math.inf, math.inf), t: float = 0.0,
                            consts: PhysicalConstants = NATURAL) -> ExpectationReport:
    """Closed-form expectation values for a state with one branch per side.

    ``state`` is a :class:`PiecewiseState` or anything with ``as_state()``.
    Per side: ``<E> = E1 rho``, ``<p> = hbar K1 rho``,
    ``<p^2> = hbar^2 (K1^2 - K0^2) varrho``, ``<V> = V0 varrho``.
    """
    if not isinstance(state, PiecewiseState):
        state = state.as_state()
    hbar = consts.hbar
    V0 = state.background.real
    energy = momentum = momentum_sq = potential = norm_rho = norm_varrho = 0.0
    for modes, lo, hi in _segments(state, window):
        if len(modes) != 1:
            raise ValueError("closed forms apply to single branches only; use expectation_quadrature")
        mode = modes[0]
        K, E = mode.K, mode.E
        base = exp_integral(2.0 * K.real, lo, hi) * math.exp(-2.0 * E.real * t / hbar)
        dens = density_pair(mode, state.form)
        rho, varrho = dens.rho_coeff * base, dens.varrho_coeff * base
        energy += E.imag * rho
        momentum += hbar * K.imag * rho
        momentum_sq += hbar**2 * (K.imag**2 - K.real**2) * varrho
        potential += V0 * varrho
        norm_rho += rho
        norm_varrho += varrho
    residual = energy - momentum_sq / (2.0 * consts.mass) - potential
    return ExpectationReport(energy, momentum, momentum_sq, potential, norm_rho, norm_varrho,
                             (float(window[0]), float(window[1]), float(t)), residual)


def _operated(modes, kind: str, state: PiecewiseState, consts: PhysicalConstants):
    if kind == "potential":
        return potential_modes(modes, state.background)
    return apply_operator(modes, kind, state.form, consts)


def symmetrized_integrand(state: PiecewiseState, kind: str, x, t: float = 0.0,
                          consts: PhysicalConstants = NATURAL, positive: bool | None = None):
    """Pointwise ``(1/2)[conj(Psi) O Psi + conj(O Psi) Psi]`` as symplectic parts.

    The first component's real part is the integrand; everything else should
    vanish and measures how real the pairing is.
    """
    x = np.asarray(x, dtype=float)
    if positive is None:
        positive = bool(np.all(x > 0))
    modes = state.side(positive)
    p0, p1 = evaluate(modes, x, t, consts.hbar)
    o0, o1 = evaluate(_operated(modes, kind, state, consts), x, t, consts.hbar)
    # conj(Psi) = conj(p0) - p1 j
    a0, a1 = symplectic_mul(np.conj(p0), -p1, o0, o1)
    b0, b1 = symplectic_mul(np.conj(o0), -o1, p0, p1)
    return 0.5 * (a0 + b0), 0.5 * (a1 + b1)


def _integrand(state, kind, t, consts, positive):
    def f(x):
        z0, _ = symmetrized_integrand(state, kind, np.array([x]), t, consts, positive)
        return float(z0[0].real)
    return f


def expectation_quadrature(state, operator_kind: str, window=(-math.inf, math.inf), t: float = 0.0,
                           consts: PhysicalConstants = NATURAL, method: str = "adaptive",
                           epsabs: float = 1e-12, epsrel: float = 1e-12, points: int = 20001) -> float:
    """Numerical expectation value of one operator over ``window``.

    ``method="adaptive"`` uses QUADPACK and raises QuadratureFailure if it
    does not converge; ``method="grid"`` uses composite Simpson on a fixed
    grid (finite windows only).
    """
    if not isinstance(state, PiecewiseState):
        state = state.as_state()
    if operator_kind not in OPERATORS:
        raise ValueError(f"unknown operator {operator_kind!r}")
    total = 0.0
    for _, lo, hi in _segments(state, window):
        positive = lo >= 0.0
        if method == "grid":
            if math.isinf(lo) or math.isinf(hi):
                raise ValueError("the fixed-grid rule needs a finite window")
            x = np.linspace(lo, hi, points)
            # keep the endpoint at 0 on the correct branch
            z0, _ = symmetrized_integrand(state, operator_kind, x, t, consts, positive)
            total += float(integrate.simpson(z0.real, x=x))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _err = integrate.quad(_integrand(state, operator_kind, t, consts, positive),
                                           lo, hi, epsabs=epsabs, epsrel=epsrel, limit=500)
            except integrate.IntegrationWarning as exc:
                raise QuadratureFailure(str(exc)) from exc
        total += val
    return total


def expectation_report_quadrature(state, window, t: float = 0.0, consts: PhysicalConstants = NATURAL,
                                  **kwargs) -> dict[str, float]:
    if not isinstance(state, PiecewiseState):
        state = state.as_state()
    return {kind: expectation_quadrature(state, kind, window, t, consts, **kwargs) for kind in OPERATORS}


def norm_quadrature(state, window, t: float = 0.0, consts: PhysicalConstants = NATURAL) -> float:
    """``int |Psi|^2 dx`` by adaptive quadrature."""
    if not isinstance(state, PiecewiseState):
        state = state.as_state()
    total = 0.0
    for modes, lo, hi in _segments(state, window):
        def f(x, modes=modes):
            p0, p1 = evaluate(modes, np.array([x]), t, consts.hbar)
            return float(abs(p0[0]) ** 2 + abs(p1[0]) ** 2)
        total += integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=500)[0]
    return total
