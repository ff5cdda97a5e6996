"""Piecewise plane-wave states.

A state is a sum of modes ``A exp(K x - E t / hbar)`` on each side of the
delta at ``x = 0``, with a quaternionic amplitude ``A`` standing on the left
of the complex exponential.  Complex states are the special case ``A1 = 0``.

Since ``(A0 + A1 j) phi = A0 phi + A1 conj(phi) j`` for complex ``phi``, the
symplectic components of a mode are ``A0 phi`` and ``A1 conj(phi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import NATURAL, PhysicalConstants, Quaternion

FORMS = ("complex", "left", "right")


@dataclass(frozen=True)
class Mode:
    amplitude: Quaternion
    K: complex
    E: complex

    def __post_init__(self):
        object.__setattr__(self, "amplitude", Quaternion.coerce(self.amplitude))
        object.__setattr__(self, "K", complex(self.K))
        object.__setattr__(self, "E", complex(self.E))

    def phase(self, x, t: float, hbar: float):
        return np.exp(self.K * np.asarray(x) - self.E * t / hbar)

    def components(self, x, t: float, hbar: float):
        phi = self.phase(x, t, hbar)
        return self.amplitude.z0 * phi, self.amplitude.z1 * np.conj(phi)

    # Operators act on the amplitude only, since every derivative of
    # A exp(...) is (A c) exp(...) for a complex c.
    def d_dx(self) -> "Mode":
        return replace(self, amplitude=self.amplitude * self.K)

    def d_dt(self, hbar: float) -> "Mode":
        return replace(self, amplitude=self.amplitude * (-self.E / hbar))

    def scaled(self, c: complex) -> "Mode":
        """Multiply on the left by a complex constant."""
        return replace(self, amplitude=c * self.amplitude)

    def right_i(self) -> "Mode":
        """Right multiplication of the whole mode by i."""
        return replace(self, amplitude=self.amplitude * 1j)


@dataclass(frozen=True)
class PiecewiseState:
    """Modes for ``x < 0`` (``left``) and ``x > 0`` (``right``).

    ``background`` is the constant potential ``U`` (or ``V``) acting away from
    the origin and ``strength`` the delta coefficient ``Q`` (or ``q``).
    """

    left: tuple[Mode, ...]
    right: tuple[Mode, ...]
    form: str = "complex"
    background: Quaternion = field(default_factory=Quaternion)
    strength: Quaternion = field(default_factory=Quaternion)

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown equation form {self.form!r}")
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "background", Quaternion.coerce(self.background))
        object.__setattr__(self, "strength", Quaternion.coerce(self.strength))

    @classmethod
    def uniform(cls, mode: Mode, form: str = "complex", background=0j) -> "PiecewiseState":
        """A single mode filling the whole line (no delta)."""
        return cls((mode,), (mode,), form=form, background=background)

    def side(self, positive: bool) -> tuple[Mode, ...]:
        return self.right if positive else self.left

    def map_modes(self, fn) -> "PiecewiseState":
        return replace(self, left=tuple(fn(m) for m in self.left), right=tuple(fn(m) for m in self.right))

    def all_modes(self) -> tuple[Mode, ...]:
        return self.left + self.right


def evaluate(modes, x, t: float = 0.0, hbar: float = 1.0):
    """Symplectic components (psi0, psi1) of the sum of ``modes`` at ``x``."""
    x = np.asarray(x, dtype=float)
    psi0 = np.zeros(x.shape, dtype=complex)
    psi1 = np.zeros(x.shape, dtype=complex)
    for mode in modes:
        z0, z1 = mode.components(x, t, hbar)
        psi0 = psi0 + z0
        psi1 = psi1 + z1
    return psi0, psi1


def evaluate_state(state: PiecewiseState, x, t: float = 0.0, hbar: float = 1.0):
    """Evaluate a piecewise state; ``x = 0`` takes the right-hand branch."""
    x = np.asarray(x, dtype=float)
    l0, l1 = evaluate(state.left, x, t, hbar)
    r0, r1 = evaluate(state.right, x, t, hbar)
    neg = x < 0
    return np.where(neg, l0, r0), np.where(neg, l1, r1)


def apply_operator(modes, kind: str, form: str, consts: PhysicalConstants = NATURAL):
    """Apply an observable to a list of modes, returning the new mode list.

    ``kind`` is one of ``energy``, ``momentum``, ``momentum_sq`` and
    ``potential``; the potential is applied by the caller since it is a left
    multiplication by a quaternion (see :func:`potential_modes`).
    ``form`` decides whether i multiplies from the left (complex, left) or
    from the right (right equation).
    """
    hbar = consts.hbar

    def times_i(m: Mode) -> Mode:
        return m.right_i() if form == "right" else m.scaled(1j)

    if kind == "energy":
        # E = i hbar d/dt, or hbar (d/dt) . i for the right equation
        return [times_i(m.d_dt(hbar).scaled(hbar)) for m in modes]
    if kind == "momentum":
        return [times_i(m.d_dx().scaled(-hbar)) for m in modes]
    if kind == "momentum_sq":
        once = apply_operator(modes, "momentum", form, consts)
        return apply_operator(once, "momentum", form, consts)
    raise ValueError(f"unknown operator {kind!r}")


def potential_modes(modes, potential: Quaternion):
    return [replace(m, amplitude=potential * m.amplitude) for m in modes]
