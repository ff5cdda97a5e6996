"""The oracle suite: closed forms against brute-force counterparts.

Each ``check_*`` function draws its own seeded sample, compares a closed form
with an independent computation and returns a :class:`CheckResult`.  The
``diagnostic_*`` functions compare printed formulas with derived ones; they
are informational and never fail the suite.

``fault`` arguments deliberately corrupt one side of a comparison so that the
harness itself can be tested.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import complex_delta as cd
from . import quat_left as ql
from . import quat_right as qr
from .algebra import NATURAL, PhysicalConstants, Quaternion, similar_to
from .errors import DeltaError
from .observables import expectation_closed_form, expectation_quadrature, norm_quadrature
from .oracle import convergence_study, default_extent, eig2, jump_residual, pde_residual, solve_matching_direct
from .wavefunction import PiecewiseState

DEFAULT_DRAWS = 10_000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    tolerance: float
    samples: int
    detail: str = ""
    informational: bool = False
    seconds: float = 0.0

    def line(self) -> str:
        tag = "INFO" if self.informational else ("PASS" if self.passed else "FAIL")
        text = f"{tag} {self.name}: max_residual={self.max_residual:.3e} tol={self.tolerance:.1e} n={self.samples}"
        return text + (f" ({self.detail})" if self.detail else "")


@dataclass
class VerifyReport:
    seed: int
    draws: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def lines(self) -> list[str]:
        return [f"seed={self.seed} draws={self.draws}"] + [c.line() for c in self.checks]


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


def _result(name, worst, tol, n, detail="", start=None, compare=None) -> CheckResult:
    ok = bool(np.isfinite(worst) and (worst <= tol if compare is None else compare(worst)))
    secs = time.perf_counter() - start if start is not None else 0.0
    return CheckResult(name, ok, float(worst), tol, n, detail, False, secs)


def _uniform_complex(rng, n, lo=-5.0, hi=5.0):
    return rng.uniform(lo, hi, n) + 1j * rng.uniform(lo, hi, n)


def _random_quaternions(rng, n, lo=-5.0, hi=5.0):
    comps = rng.uniform(lo, hi, (n, 4))
    return [Quaternion.from_components(*row) for row in comps]


# --- complex equation ------------------------------------------------------

def check_dispersion(seed=42, draws=100_000, consts=NATURAL, fault=False, tol=1e-10) -> CheckResult:
    start = time.perf_counter()
    rng = _rng(seed, 1)
    E = _uniform_complex(rng, draws)
    V = _uniform_complex(rng, draws)
    worst = 0.0
    for e, v in zip(E.tolist(), V.tolist()):
        K = cd.solve_autonomous(e, v, consts).K
        if fault:
            K *= 1 + 1e-6
        worst = max(worst, *cd.dispersion_residuals(K, e, v, consts))
    return _result("dispersion", worst, tol, draws, start=start)


def check_conservation(seed=42, draws=100_000, consts=NATURAL, fault=False, tol=1e-10) -> CheckResult:
    """Both energy identities for the solved K, relative to the largest term."""
    start = time.perf_counter()
    rng = _rng(seed, 1)
    E = _uniform_complex(rng, draws)
    V = _uniform_complex(rng, draws)
    worst = 0.0
    kin, hm = consts.kinetic, 1.0 / consts.m_over_hbar2
    for e, v in zip(E.tolist(), V.tolist()):
        K = cd.solve_autonomous(e, v, consts).K
        E1 = e.imag + (1e-6 if fault else 0.0)
        k2 = kin * (K.imag**2 - K.real**2)
        kk = hm * K.real * K.imag
        r1 = abs(E1 - k2 - v.real) / max(abs(E1), abs(k2), abs(v.real), 1.0)
        r2 = abs(e.real - kk + v.imag) / max(abs(e.real), abs(kk), abs(v.imag), 1.0)
        worst = max(worst, r1, r2)
    return _result("conservation", worst, tol, draws, start=start)


def check_bound_state(consts=PhysicalConstants(), fault=False, window=30.0) -> CheckResult:
    """q0 = -2 with hbar = m = 1: closed forms, quadrature norm and expectation identities."""
    start = time.perf_counter()
    b = cd.solve_bound_state(cd.ComplexPotential(-2.0), consts)
    state = b.as_state()
    if fault:
        state = state.map_modes(lambda m: m.scaled(1.001))
    closed = abs(b.K - 2.0) + abs(b.E - complex(0, -2.0))
    norm = norm_quadrature(state, (-window, window))
    rep = expectation_closed_form(state, (-window, window))
    p2 = expectation_quadrature(state, "momentum_sq", (-window, window), consts=consts)
    en = expectation_quadrature(state, "energy", (-window, window), consts=consts)
    pot = expectation_quadrature(state, "potential", (-window, window), consts=consts)
    worst_norm = abs(norm - 1.0)
    worst_ident = max(abs(p2 + 4.0 * norm), abs(en - p2 / 2.0 - pot), abs(rep.momentum_sq - p2))
    ok = closed == 0.0 and worst_norm <= 1e-8 and worst_ident <= 1e-10
    detail = f"closed={closed:.1e} norm_err={worst_norm:.1e} identities={worst_ident:.1e}"
    return CheckResult("bound_state", ok, max(closed, worst_norm, worst_ident), 1e-8, 1, detail, False,
                       time.perf_counter() - start)


def check_unitarity(n=100, consts=NATURAL, fault=False, tol=1e-12) -> CheckResult:
    start = time.perf_counter()
    ks = np.linspace(0.1, 5.0, n)
    qs = np.linspace(-5.0, 5.0, n)
    qs = qs[qs != 0.0]
    worst = 0.0
    s = consts.m_over_hbar2
    for k in ks.tolist():
        for q in qs.tolist():
            sol = cd.solve_scattering(complex(0, k), cd.ComplexPotential(q), consts)
            T = sol.T * (1 + 1e-6) if fault else sol.T
            unit = abs(abs(sol.R) ** 2 + abs(T) ** 2 - 1.0)
            trans = abs(abs(T) ** 2 - 1.0 / (1.0 + (s * q / k) ** 2))
            worst = max(worst, unit, trans)
    return _result("unitarity", worst, tol, len(ks) * len(qs), start=start)


def check_flux_formula(seed=42, draws=DEFAULT_DRAWS, consts=NATURAL, fault=False, tol=1e-10) -> CheckResult:
    """Closed-form flux against |R|^2 + |T|^2 from the direct linear solve (relative)."""
    start = time.perf_counter()
    rng = _rng(seed, 5)
    q = _uniform_complex(rng, draws)
    K = _uniform_complex(rng, draws)
    worst, used = 0.0, 0
    s = consts.m_over_hbar2
    for qq, kk in zip(q.tolist(), K.tolist()):
        if kk == 0 or abs(1 + s * qq / kk.conjugate()) < 1e-8:
            continue
        R, T = solve_matching_direct(kk, qq, consts)
        direct = abs(R) ** 2 + abs(T) ** 2
        formula = cd.flux_formula(kk, qq, consts) * (1 + 1e-6 if fault else 1.0)
        worst = max(worst, abs(formula - direct) / max(1.0, abs(direct)))
        used += 1
    return _result("flux_formula", worst, tol, used, start=start)


def check_matching(seed=42, draws=DEFAULT_DRAWS, consts=NATURAL, fault=False, tol=1e-12) -> CheckResult:
    """Closed-form R, T against the direct solve, relative to |R| + |T|."""
    start = time.perf_counter()
    rng = _rng(seed, 11)
    q = _uniform_complex(rng, draws)
    K = _uniform_complex(rng, draws)
    worst, used = 0.0, 0
    s = consts.m_over_hbar2
    for qq, kk in zip(q.tolist(), K.tolist()):
        if abs(1 + s * qq / kk.conjugate()) < 1e-3:
            continue
        sol = cd.solve_scattering(kk, cd.ComplexPotential(qq), consts)
        R, T = solve_matching_direct(kk, qq, consts)
        T0 = sol.T + (1e-6 if fault else 0.0)
        scale = max(1.0, abs(R) + abs(T))
        worst = max(worst, (abs(sol.R - R) + abs(T0 - T)) / scale)
        used += 1
    return _result("matching_direct", worst, tol, used, start=start)


# --- quaternionic equations ------------------------------------------------

def check_quat_eigen(seed=42, draws=DEFAULT_DRAWS, consts=NATURAL, fault=False, tol=1e-8) -> CheckResult:
    """Closed-form K0^2, K1^2 of the left equation against eig2 of the evolution matrix."""
    start = time.perf_counter()
    rng = _rng(seed, 6)
    E = _uniform_complex(rng, draws)
    Us = _random_quaternions(rng, draws)
    s = consts.m_over_hbar2
    worst, used = 0.0, 0
    for e, U in zip(E.tolist(), Us):
        alpha, beta = ql.alpha_beta(e, U)
        if math.hypot(alpha, beta) < 1e-12:
            continue
        M = ql.evolution_matrix(e, U + 1e-3 if fault else U)
        lams = eig2(M).values
        for sign in (1, -1):
            k0s, k1s = ql.k_squares(e, U, sign, consts)
            best = min(
                abs(k0s - s * (abs(lam) + lam.real)) + abs(k1s - s * (abs(lam) - lam.real)) for lam in lams
            )
            worst = max(worst, best / max(k0s, k1s, 1e-300))
        used += 1
    return _result("quat_eigen", worst, tol, used, start=start)


def check_complex_limit(seed=42, draws=1000, consts=NATURAL, fault=False, u1=1e-6) -> CheckResult:
    """|U1| = 1e-6: left K near the complex K and |A1/A0| below 1e-6.

    Draws keep ``2|E0 + V1 + i E1| >= 1``; closer to that degeneracy the two
    complex branches meet and the limit is singular.
    """
    start = time.perf_counter()
    rng = _rng(seed, 7)
    size = u1 * (1e3 if fault else 1.0)
    worst_k, worst_ratio, used = 0.0, 0.0, 0
    while used < draws:
        e = complex(*rng.uniform(-5, 5, 2))
        v = complex(*rng.uniform(-5, 5, 2))
        phase = rng.uniform(0, 2 * math.pi)
        if 2.0 * abs(complex(e.real + v.imag, e.imag)) < 1.0:
            continue
        U = Quaternion(v, size * complex(math.cos(phase), math.sin(phase)))
        sign = ql.complex_limit_sign(e, U)
        br = ql.solve_autonomous_left(e, U, consts=consts, eig_sign=sign)
        Kc = cd.solve_autonomous(e, v, consts).K
        worst_k = max(worst_k, abs(br.K - Kc))
        worst_ratio = max(worst_ratio, abs(br.A1 / br.A0))
        used += 1
    ok = worst_k < 1e-9 and worst_ratio < 1e-6
    return CheckResult("complex_limit", ok, worst_k, 1e-9, used,
                       f"max|A1/A0|={worst_ratio:.3e} (tol 1e-6)", False, time.perf_counter() - start)


def check_quat_delta(seed=42, draws=DEFAULT_DRAWS, consts=NATURAL, fault=False, tol=1e-12) -> CheckResult:
    """K against eig2 of the strength matrix, complex sandwich and |K| = (m/hbar^2)|Q|."""
    start = time.perf_counter()
    rng = _rng(seed, 8)
    s = consts.m_over_hbar2
    worst = 0.0
    for Q in _random_quaternions(rng, draws):
        lams = eig2(ql.strength_matrix(Q)).values
        scale = Q.norm()
        for sign in (1, -1):
            br = ql.solve_delta_left(Q, consts=consts, eig_sign=sign)
            K = br.K * (1 + 1e-6) if fault else br.K
            k_err = min(abs(K + s * lam) for lam in lams) / (s * scale)
            sw = ql.sandwich_of(br, Q)
            worst = max(worst, k_err, abs(sw.z1) / scale, abs(abs(K) - s * scale) / (s * scale))
    return _result("quat_delta", worst, tol, draws, start=start)


def check_right_obstruction(seed=42, draws=DEFAULT_DRAWS, consts=NATURAL, fault=False, floor=1e-8) -> CheckResult:
    """With E0 = 0 and U1 != 0 no right-equation branch has K0 = 0 or K1 = 0."""
    start = time.perf_counter()
    rng = _rng(seed, 9)
    E1 = rng.uniform(-5, 5, draws)
    smallest = math.inf
    for e1, U in zip(E1.tolist(), _random_quaternions(rng, draws)):
        if fault:
            U = Quaternion(U.z0.real)
        if U.z1 == 0 and not fault:
            continue
        for sign in (1, -1):
            K = qr.solve_autonomous_right(complex(0, e1), U, consts, sign).K
            smallest = min(smallest, abs(K.real), abs(K.imag))
    return _result("right_obstruction", smallest, floor, draws, "min(|K0|,|K1|)", start=start,
                   compare=lambda v: v > floor)


# --- PDE and jump ----------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    state: PiecewiseState
    x_max: float
    h0: float


def _entry(name, state, consts=NATURAL) -> CatalogEntry:
    return CatalogEntry(name, state, *default_extent(state))


def solution_catalog(consts: PhysicalConstants = NATURAL) -> list[CatalogEntry]:
    """Analytically solved states of every kind and equation form."""
    out = []
    bound = cd.solve_bound_state(cd.ComplexPotential(-2.0, 0.5 + 0.25j), consts)
    out.append(_entry("complex/bound", bound.as_state(), consts))
    scat = cd.solve_scattering(1.3j, cd.ComplexPotential(0.8), consts)
    out.append(_entry("complex/scattering_real_q", scat.as_state(), consts))
    scat2 = cd.solve_scattering(0.4 + 1.3j, cd.ComplexPotential(0.7 + 0.2j, 0.3 - 0.1j), consts)
    out.append(_entry("complex/scattering_complex_q", scat2.as_state(), consts))
    auto = cd.solve_autonomous(0.3 + 1.0j, 0.2 - 0.4j, consts)
    out.append(_entry("complex/autonomous", auto.as_state(), consts))

    U = Quaternion(0.2 - 0.4j, 0.5 + 0.1j)
    left = ql.solve_autonomous_left(0.3 + 1.0j, U, consts=consts, eig_sign=1)
    out.append(_entry("left/autonomous", left.as_state(), consts))
    Qr = Quaternion(-1.5)
    Uc = Quaternion(0.3, 0.4)
    dl = ql.solve_delta_left(Qr, Uc, consts)
    out.append(_entry("left/delta_real_Q", ql.delta_state(dl, Qr, "left"), consts))
    q = -left.K / consts.m_over_hbar2
    Qs = similar_to(left.amplitude, q)
    ds = ql.solve_delta_left(Qs, U, consts, eig_sign=1 if q.imag >= 0 else -1)
    out.append(_entry("left/delta_similar_Q", ql.delta_state(ds, Qs, "left"), consts))
    Us = Quaternion(0.3, 0.4 + 0.2j)
    Es = 2.0j
    stat = ql.solve_autonomous_left(Es, Us, consts=consts, eig_sign=-1)
    qs = 0.6 + 0.3j
    Qsc = similar_to(stat.amplitude, qs)
    st = ql.scattering_state_left(stat.K, Qsc, Us, consts, eig_sign=1, E=Es)
    out.append(_entry("left/scattering", st, consts))

    right = qr.solve_autonomous_right(0.3 + 1.0j, U, consts, eig_sign=1)
    out.append(_entry("right/autonomous", right.as_state(), consts))
    Qq = Quaternion(-1.5, 0.4 + 0.2j)
    dr = qr.solve_delta_right(Qq, consts=consts)
    out.append(_entry("right/delta", ql.delta_state(dr, Qq, "right"), consts))
    return out


def check_pde(consts=NATURAL, fault=False, h=1e-3, pde_tol=1e-6, jump_tol=1e-12,
              slope_tol=0.3) -> CheckResult:
    start = time.perf_counter()
    worst_pde = worst_jump = worst_slope = 0.0
    failures = []
    catalog = solution_catalog(consts)
    for entry in catalog:
        state = entry.state
        if fault:
            state = state.map_modes(lambda m: type(m)(m.amplitude, m.K + 0.01, m.E))
        try:
            rep = pde_residual(state, entry.x_max, h, 0.0, consts)
            jump = rep.jump_residual
        except DeltaError as exc:
            failures.append(f"{entry.name}:{type(exc).__name__}")
            continue
        _, _, slope = convergence_study(state, entry.h0, entry.x_max, 3, 0.0, consts)
        worst_pde = max(worst_pde, rep.pde_residual_max)
        worst_jump = max(worst_jump, jump)
        worst_slope = max(worst_slope, abs(slope - 4.0))
        if rep.pde_residual_max > pde_tol or jump > jump_tol or abs(slope - 4.0) > slope_tol:
            failures.append(entry.name)
    ok = not failures
    detail = f"pde={worst_pde:.1e} jump={worst_jump:.1e} |slope-4|={worst_slope:.2f}"
    if failures:
        detail += " failing=" + ",".join(failures)
    return CheckResult("pde_jump", ok, worst_pde, pde_tol, len(catalog), detail, False,
                       time.perf_counter() - start)


# --- informational diagnostics ---------------------------------------------

def diagnostic_jump_sign(seed=42, draws=1000, consts=NATURAL) -> CheckResult:
    """Matching with the opposite sign on the delta term against the derived one."""
    rng = _rng(seed, 20)
    worst_diff = worst_jump = 0.0
    for qq, kk in zip(_uniform_complex(rng, draws, -2, 2).tolist(), _uniform_complex(rng, draws, -2, 2).tolist()):
        if abs(kk) < 1e-3 or abs(1 + consts.m_over_hbar2 * qq / kk.conjugate()) < 1e-3:
            continue
        if abs(kk.conjugate() - consts.m_over_hbar2 * qq) < 1e-3:
            continue
        sol = cd.solve_scattering(kk, cd.ComplexPotential(qq), consts)
        Rp, Tp = cd.printed_matching_solution(kk, qq, consts)
        worst_diff = max(worst_diff, abs(Tp - sol.T))
        printed = cd.ScatteringSolution(Rp, Tp, 0.0, sol.calE0, kk, sol.E, sol.potential).as_state()
        worst_jump = max(worst_jump, jump_residual(printed, consts))
    return CheckResult("printed_jump_sign", True, worst_jump, 0.0, draws,
                       f"printed sign: max|dT|={worst_diff:.3e}, jump residual up to {worst_jump:.3e}; "
                       "derived sign satisfies the jump", True)


def diagnostic_confined_energy(seed=42, draws=1000, consts=NATURAL) -> CheckResult:
    """Printed confined E1^2 (Re Q unsquared) against the value from the eigenvalue."""
    rng = _rng(seed, 21)
    worst = 0.0
    for q0, U in zip(rng.uniform(-5, -0.1, draws).tolist(), _random_quaternions(rng, draws)):
        Q = Quaternion(q0)
        derived = ql.confined_energy_left(Q, U, consts) ** 2
        worst = max(worst, abs(ql.printed_confined_energy_squared(Q, U, consts) - derived))
    return CheckResult("printed_confined_energy", True, worst, 0.0, draws,
                       f"printed E1^2 differs from derived by up to {worst:.3e}", True)


def diagnostic_right_k(seed=42, draws=1000, consts=NATURAL) -> CheckResult:
    """Printed right-equation K0^2, K1^2 against the exact eigenvalue."""
    rng = _rng(seed, 22)
    worst, nans = 0.0, 0
    for e, U in zip(_uniform_complex(rng, draws).tolist(), _random_quaternions(rng, draws)):
        for sign in (1, -1):
            p = qr.printed_k_squares(e, U, sign, sign, consts)
            d = qr.derived_k_squares(e, U, sign, consts)
            if math.isnan(p[0]):
                nans += 1
                continue
            worst = max(worst, abs(p[0] - d[0]) + abs(p[1] - d[1]))
    return CheckResult("printed_right_k", True, worst, 0.0, 2 * draws,
                       f"printed K^2 differs by up to {worst:.3e}; {nans} draws have a negative printed radicand",
                       True)


CHECKS = {
    "dispersion": check_dispersion,
    "conservation": check_conservation,
    "bound_state": check_bound_state,
    "unitarity": check_unitarity,
    "flux_formula": check_flux_formula,
    "matching_direct": check_matching,
    "quat_eigen": check_quat_eigen,
    "complex_limit": check_complex_limit,
    "quat_delta": check_quat_delta,
    "right_obstruction": check_right_obstruction,
    "pde_jump": check_pde,
}

DIAGNOSTICS = {
    "printed_jump_sign": diagnostic_jump_sign,
    "printed_confined_energy": diagnostic_confined_energy,
    "printed_right_k": diagnostic_right_k,
}

_SEEDED = {"dispersion", "conservation", "flux_formula", "matching_direct", "quat_eigen", "complex_limit",
           "quat_delta", "right_obstruction"}


def run_verify(seed: int = 42, draws: int = DEFAULT_DRAWS, consts: PhysicalConstants = NATURAL,
               fault: str | None = None, only=None) -> VerifyReport:
    """Run every check (or those named in ``only``) and the diagnostics."""
    if fault is not None and fault not in CHECKS:
        raise ValueError(f"unknown fault {fault!r}; choose from {sorted(CHECKS)}")
    report = VerifyReport(seed, draws)
    for name, fn in CHECKS.items():
        if only is not None and name not in only:
            continue
        kwargs = {"consts": consts, "fault": name == fault}
        if name in _SEEDED:
            kwargs.update(seed=seed, draws=draws)
        if name == "bound_state":
            # the reference values are stated in natural units
            kwargs["consts"] = NATURAL
        report.checks.append(fn(**kwargs))
    for name, fn in DIAGNOSTICS.items():
        if only is None or name in only:
            report.checks.append(fn(seed=seed, consts=consts))
    return report
