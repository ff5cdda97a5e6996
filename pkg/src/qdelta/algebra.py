"""Quaternion and complex arithmetic.

Quaternions are stored in symplectic form ``z0 + z1 j`` with complex ``z0``
and ``z1``; the four real components are ``a + b i + c j + d k`` with
``z0 = a + b i`` and ``z1 = c + d i``.  Complex numbers are plain Python
``complex``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError(f"hbar and mass must be positive, got {self.hbar}, {self.mass}")

    @property
    def m_over_hbar2(self) -> float:
        return self.mass / self.hbar**2

    @property
    def kinetic(self) -> float:
        """hbar^2 / 2m, the coefficient of the Laplacian."""
        return self.hbar**2 / (2.0 * self.mass)


NATURAL = PhysicalConstants()


def is_zero(value, *scale, rtol: float = ZERO_RTOL) -> bool:
    """Zero test with absolute tolerance ``rtol * max(|scale|)``.

    With no scale (or an all-zero scale) the test is exact.
    """
    tol = rtol * max((abs(s) for s in scale), default=0.0)
    return abs(value) <= tol


def check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return sign


def symplectic_mul(p0, p1, q0, q1):
    """(p0 + p1 j)(q0 + q1 j) on complex scalars or numpy arrays."""
    return p0 * q0 - p1 * np.conj(q1), p0 * q1 + p1 * np.conj(q0)


@dataclass(frozen=True)
class Quaternion:
    z0: complex = 0j
    z1: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "z0", complex(self.z0))
        object.__setattr__(self, "z1", complex(self.z1))

    @classmethod
    def from_components(cls, a: float, b: float = 0.0, c: float = 0.0, d: float = 0.0) -> "Quaternion":
        return cls(complex(a, b), complex(c, d))

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, Number):
            return cls(complex(value))
        raise TypeError(f"cannot interpret {value!r} as a quaternion")

    @property
    def a(self) -> float:
        return self.z0.real

    @property
    def b(self) -> float:
        return self.z0.imag

    @property
    def c(self) -> float:
        return self.z1.real

    @property
    def d(self) -> float:
        return self.z1.imag

    @property
    def components(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def real(self) -> float:
        return self.z0.real

    @property
    def imag_norm(self) -> float:
        """Euclidean norm of the vector part b i + c j + d k."""
        return math.sqrt(self.z0.imag**2 + abs(self.z1) ** 2)

    def norm_sq(self) -> float:
        return abs(self.z0) ** 2 + abs(self.z1) ** 2

    def norm(self) -> float:
        return math.hypot(abs(self.z0), abs(self.z1))

    def conj(self) -> "Quaternion":
        return Quaternion(self.z0.conjugate(), -self.z1)

    def inverse(self) -> "Quaternion":
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion inverse of zero")
        c = self.conj()
        return Quaternion(c.z0 / n2, c.z1 / n2)

    def is_complex(self, rtol: float = ZERO_RTOL) -> bool:
        return is_zero(self.z1, self.z0, self.z1, rtol=rtol)

    def __add__(self, other):
        other = Quaternion.coerce(other)
        return Quaternion(self.z0 + other.z0, self.z1 + other.z1)

    __radd__ = __add__

    def __sub__(self, other):
        other = Quaternion.coerce(other)
        return Quaternion(self.z0 - other.z0, self.z1 - other.z1)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.z0, -self.z1)

    def __mul__(self, other):
        if isinstance(other, Number):
            # right multiplication by a complex scalar: (z0 + z1 j) w = z0 w + z1 conj(w) j
            w = complex(other)
            return Quaternion(self.z0 * w, self.z1 * w.conjugate())
        if isinstance(other, Quaternion):
            return Quaternion(*symplectic_mul(self.z0, self.z1, other.z0, other.z1))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            w = complex(other)
            return Quaternion(w * self.z0, w * self.z1)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number) and complex(other).imag == 0:
            s = complex(other).real
            return Quaternion(self.z0 / s, self.z1 / s)
        return NotImplemented

    def __repr__(self) -> str:
        return "Quaternion(%r, %r, %r, %r)" % self.components


ONE = Quaternion(1)
I = Quaternion(1j)
J = Quaternion(0, 1)
K = Quaternion(0, 1j)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    return Quaternion.coerce(p) * Quaternion.coerce(q)


def quat_sandwich(A: Quaternion, Q: Quaternion) -> Quaternion:
    """Normalized similarity transform ``conj(A) Q A / |A|^2``.

    Raises ZeroAmplitude if ``A`` vanishes.
    """
    from .errors import ZeroAmplitude

    A = Quaternion.coerce(A)
    n = A.norm()
    if n == 0.0:
        raise ZeroAmplitude("sandwich with a zero quaternion")
    # normalize first so tiny or huge amplitudes neither underflow nor overflow
    u = A / n
    return u.conj() * Quaternion.coerce(Q) * u


def similar_to(A: Quaternion, q: complex) -> Quaternion:
    """The quaternion ``A q A^{-1}``, whose sandwich by ``A`` is the complex ``q``."""
    A = Quaternion.coerce(A)
    return A * Quaternion(q) * A.inverse()


def eigen_vector(M: np.ndarray, lam: complex) -> tuple[complex, complex]:
    """Unscaled eigenvector of the 2x2 matrix ``M`` at eigenvalue ``lam``.

    Row 1 gives ``(M01, lam - M00)`` and row 2 gives ``(lam - M11, M10)``;
    the row with the larger entries avoids cancellation.  The result is
    rescaled by its largest entry so subnormal inputs stay representable.
    """
    d0 = complex(M[0, 0] - lam)
    d1 = complex(lam - M[1, 1])
    a = (complex(M[0, 1]), -d0)
    b = (d1, complex(M[1, 0]))
    v = a if max(map(abs, a)) >= max(map(abs, b)) else b
    top = max(abs(v[0]), abs(v[1]))
    if top == 0.0:
        return 1 + 0j, 0j
    if top < 1e-150 or top > 1e150:
        e = -math.frexp(top)[1]
        v = tuple(complex(math.ldexp(z.real, e), math.ldexp(z.imag, e)) for z in v)
    return v


def eigen_ratio(M: np.ndarray, lam: complex) -> complex:
    """``v1 / v0`` for an eigenvector of ``M`` at ``lam`` (infinite if ``v0 = 0``)."""
    v0, v1 = eigen_vector(M, lam)
    return v1 / v0 if v0 != 0 else complex("inf")


def unit_eigen_amplitude(M: np.ndarray, lam: complex) -> tuple[complex, complex]:
    """Amplitude ``(A0, A1)`` with ``(A0, conj A1)`` a unit eigenvector and A0 real, non-negative."""
    v0, v1 = eigen_vector(M, lam)
    n = math.hypot(abs(v0), abs(v1))
    phase = 1.0
    if v0 != 0:
        # rescale exactly before dividing so a subnormal v0 keeps a unit phase
        e = -math.frexp(abs(v0))[1]
        w = complex(math.ldexp(v0.real, e), math.ldexp(v0.imag, e))
        phase = w.conjugate() / abs(w)
    return complex(abs(v0) / n), (v1 * phase / n).conjugate()


def eigen_residual(M: np.ndarray, A0: complex, A1: complex, lam: complex) -> float:
    """Relative residual of ``M v = lam v`` for the amplitude vector ``v = (A0, conj A1)``."""
    v = np.array([A0, np.conj(A1)])
    r = M @ v - lam * v
    scale = max(np.linalg.norm(M, 2), abs(lam), 1e-300) * max(np.linalg.norm(v), 1e-300)
    return float(np.linalg.norm(r) / scale)
