"""Complex wave functions: autonomous particle, bound state and scattering.

Away from the origin the wave function is built from plane waves
``A exp(K x - E t / hbar)`` with complex ``K = K0 + K1 i`` and
``E = E0 + E1 i`` in the constant background ``V = V0 + V1 i``.  The delta
``q delta(x)`` enters only through continuity and the derivative jump at 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .algebra import NATURAL, PhysicalConstants, Quaternion, check_sign, is_zero
from .errors import InconsistentEnergy, NoBoundState, NonConfining, PoleAtG, SingularMatching
from .wavefunction import Mode, PiecewiseState

RESIDUAL_RTOL = 1e-10


class StationarityClass(enum.Enum):
    PURE_STATIONARY = "PureStationary"
    PURE_NON_OSCILLATORY = "PureNonOscillatory"
    MIXED = "Mixed"
    DEGENERATE = "Degenerate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ComplexPotential:
    q: complex = 0j
    V: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "q", complex(self.q))
        object.__setattr__(self, "V", complex(self.V))


@dataclass(frozen=True)
class ComplexBranch:
    K: complex
    E: complex
    V: complex
    branch_sign: int = 1

    def residuals(self, consts: PhysicalConstants = NATURAL) -> tuple[float, float]:
        return dispersion_residuals(self.K, self.E, self.V, consts)

    def as_state(self) -> PiecewiseState:
        return PiecewiseState.uniform(Mode(1.0, self.K, self.E), "complex", self.V)


@dataclass(frozen=True)
class BoundState:
    K: complex
    E: complex
    amplitude: float
    potential: ComplexPotential

    def as_state(self) -> PiecewiseState:
        left = Mode(self.amplitude, self.K, self.E)
        right = Mode(self.amplitude, -self.K, self.E)
        return PiecewiseState((left,), (right,), "complex", self.potential.V, self.potential.q)


@dataclass(frozen=True)
class ScatteringSolution:
    R: complex
    T: complex
    flux_balance: float
    calE0: float
    K: complex = 0j
    E: complex = 0j
    potential: ComplexPotential = ComplexPotential()

    @property
    def calE(self) -> complex:
        return complex(self.calE0, self.E.imag)

    def as_state(self, amplitude: Quaternion | complex = 1.0, form: str = "complex", background=None, strength=None) -> PiecewiseState:
        """Incident plus reflected wave for x < 0, transmitted wave for x > 0.

        Continuity holds for all t only when ``E == calE`` (``K0 K1 = 0``);
        otherwise the matching is exact at t = 0.
        """
        A = Quaternion.coerce(amplitude)
        Kc = self.K.conjugate()
        left = (Mode(A, self.K, self.E), Mode(A * self.R, Kc, self.calE))
        right = (Mode(A * self.T, -Kc, self.calE),)
        bg = self.potential.V if background is None else background
        st = self.potential.q if strength is None else strength
        return PiecewiseState(left, right, form, bg, st)


def dispersion_residuals(K: complex, E: complex, V: complex, consts: PhysicalConstants = NATURAL) -> tuple[float, float]:
    """Relative residuals of the real and imaginary dispersion relations."""
    c = 2.0 * consts.m_over_hbar2
    K0, K1 = K.real, K.imag
    t1 = c * (V.real - E.imag)
    t2 = c * (V.imag + E.real)
    r1 = K0 * K0 - K1 * K1 - t1
    r2 = 2.0 * K0 * K1 - t2
    scale = max(K0 * K0, K1 * K1, abs(t1), abs(t2), 1e-300)
    return abs(r1) / scale, abs(r2) / scale


def k_from_eigenvalue(lam: complex, consts: PhysicalConstants = NATURAL) -> complex:
    """K with ``hbar^2 K^2 / 2m = lam`` and ``K0 >= 0``.

    ``K0^2 = (m/hbar^2)(|lam| + Re lam)`` and ``K1^2 = (m/hbar^2)(|lam| - Re lam)``.
    The square without cancellation is taken from its closed form and the
    other component from ``2 K0 K1 = (2m/hbar^2) Im lam``.
    """
    s = consts.m_over_hbar2
    re, im = lam.real, lam.imag
    mod = math.hypot(re, im)
    if mod == 0.0:
        return 0j
    if re >= 0.0:
        K0 = math.sqrt(s * (mod + re))
        K1 = s * im / K0
    else:
        K1 = math.copysign(math.sqrt(s * (mod - re)), im)
        K0 = s * abs(im) / abs(K1)
    return complex(K0, K1)


def k_squares(E: complex, V: complex, consts: PhysicalConstants = NATURAL) -> tuple[float, float]:
    """Literal closed forms for K0^2 and K1^2."""
    s = consts.m_over_hbar2
    E0, E1 = E.real, E.imag
    V0, V1 = V.real, V.imag
    root = math.sqrt((E1 - V0) ** 2 + (V1 + E0) ** 2)
    return s * (V0 - E1 + root), s * (E1 - V0 + root)


def solve_autonomous(E: complex, V: complex, consts: PhysicalConstants = NATURAL, branch: int = 1) -> ComplexBranch:
    E, V = complex(E), complex(V)
    check_sign(branch)
    # hbar^2 K^2 / 2m = (V0 - E1) + (V1 + E0) i
    lam = complex(V.real - E.imag, V.imag + E.real)
    return ComplexBranch(branch * k_from_eigenvalue(lam, consts), E, V, branch)


def energy_from_k(K: complex, V: complex, consts: PhysicalConstants = NATURAL) -> complex:
    """The E for which ``exp(K x - E t / hbar)`` solves the equation in background V."""
    E1 = consts.kinetic * (K.imag**2 - K.real**2) + V.real
    E0 = K.real * K.imag / consts.m_over_hbar2 - V.imag
    return complex(E0, E1)


def classify_stationarity(E: complex, V: complex) -> StationarityClass:
    E, V = complex(E), complex(V)
    scale = (E.real, E.imag, V.real, V.imag)
    if not is_zero(V.imag + E.real, *scale):
        return StationarityClass.MIXED
    gap = E.imag - V.real
    if is_zero(gap, *scale):
        return StationarityClass.DEGENERATE
    return StationarityClass.PURE_STATIONARY if gap > 0 else StationarityClass.PURE_NON_OSCILLATORY


def solve_bound_state(pot: ComplexPotential, consts: PhysicalConstants = NATURAL) -> BoundState:
    """Normalized bound state of an attractive real delta.

    ``K = -m q / hbar^2`` and ``E1 = -(m / 2 hbar^2) q0^2 + V0``, ``E0 = -V1``.
    The amplitude ``sqrt(K0)`` gives unit norm at t = 0.
    """
    q = pot.q
    if not is_zero(q.imag, q.real, q.imag):
        raise NonConfining(f"q1 = {q.imag} gives K1 != 0")
    if q.real >= 0:
        raise NoBoundState(f"q0 = {q.real} >= 0 cannot be normalized")
    K0 = -consts.m_over_hbar2 * q.real
    E1 = -0.5 * consts.m_over_hbar2 * q.real**2 + pot.V.real
    return BoundState(complex(K0), complex(-pot.V.imag, E1), math.sqrt(K0), pot)


def scattered_energy(K: complex, pot: ComplexPotential, consts: PhysicalConstants = NATURAL) -> tuple[complex, float]:
    """Incident energy E from the dispersion relation and the reflected/transmitted ``calE0``."""
    E = energy_from_k(K, pot.V, consts)
    return E, -2.0 * pot.V.imag - E.real


def transmission(K: complex, q: complex, consts: PhysicalConstants = NATURAL) -> complex:
    """Closed-form T from continuity and the derivative jump.

    With ``g = m q / (hbar^2 conj K)``, ``T = -i K1 / (conj(K) (1 + g))``.
    """
    Kc = K.conjugate()
    g = consts.m_over_hbar2 * q / Kc
    denom = Kc * (1.0 + g)
    if is_zero(1.0 + g, 1.0, g, rtol=1e-14):
        raise SingularMatching(f"1 + g vanishes for K={K}, q={q}")
    return -1j * K.imag / denom


def solve_scattering(K: complex, pot: ComplexPotential, consts: PhysicalConstants = NATURAL,
                     calE0: float | None = None) -> ScatteringSolution:
    K = complex(K)
    if K == 0:
        raise SingularMatching("K = 0 makes the matching conditions singular")
    E, expected = scattered_energy(K, pot, consts)
    if calE0 is not None and not math.isclose(calE0, expected, rel_tol=RESIDUAL_RTOL, abs_tol=RESIDUAL_RTOL):
        raise InconsistentEnergy(f"calE0 = {calE0} but the dispersion relation requires {expected}")
    T = transmission(K, pot.q, consts)
    R = T - 1.0
    return ScatteringSolution(R, T, abs(R) ** 2 + abs(T) ** 2, expected, K, E, pot)


def flux_formula(K: complex, q: complex, consts: PhysicalConstants = NATURAL) -> float:
    """|R|^2 + |T|^2 evaluated from the closed-form expression in K and g."""
    K, q = complex(K), complex(q)
    if K == 0:
        raise SingularMatching("K = 0")
    Kc = K.conjugate()
    g = consts.m_over_hbar2 * q / Kc
    one_g = 1.0 + g
    if abs(one_g) < 1e-12:
        raise PoleAtG(f"|1 + g| = {abs(one_g)}")
    gc = g.conjugate()
    bracket = 2.0 * K.imag + 1j * ((1.0 + gc) * K - one_g * Kc)
    value = 1.0 + K.imag / abs(K) ** 2 * bracket / abs(one_g) ** 2
    return value.real


def printed_matching_solution(K: complex, q: complex, consts: PhysicalConstants = NATURAL) -> tuple[complex, complex]:
    """R, T from the matching system with ``+2mq/hbar^2`` on the right of the jump equation.

    That sign disagrees with integrating the wave equation across the delta;
    the values are kept for the printed-versus-derived diagnostic.
    """
    K, q = complex(K), complex(q)
    Kc = K.conjugate()
    T = (Kc - K) / (2.0 * Kc - 2.0 * consts.m_over_hbar2 * q)
    return T - 1.0, T
