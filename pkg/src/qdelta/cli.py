"""Command-line front end: ``qdelta solve | scan | verify``.

Exit codes: 0 on success, 1 on a solver error or a failed verification,
2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import complex_delta as cd
from . import quat_left as ql
from . import quat_right as qr
from .algebra import PhysicalConstants, Quaternion
from .errors import DeltaError, PoleAtG
from .observables import expectation_closed_form
from .oracle import default_extent, pde_residual
from .verify import CHECKS, DEFAULT_DRAWS, run_verify

SCHEMA_VERSION = 1
SCAN_PARAMS = ("E0", "E1", "V0", "V1", "U1", "q0", "q1", "k0", "k1")


class ConfigError(Exception):
    pass


# --- value parsers ---------------------------------------------------------

def _floats(text: str, n: int, what: str) -> list[float]:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number in {what} {text!r}") from exc


def parse_quaternion(text: str) -> Quaternion:
    return Quaternion.from_components(*_floats(text, 4, "quaternion"))


def parse_complex(text: str) -> complex:
    """``re,im`` or a single real number."""
    parts = str(text).split(",")
    if len(parts) == 1:
        try:
            return complex(float(parts[0]))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad number {text!r}") from exc
    return complex(*_floats(text, 2, "complex value"))


def parse_window(text: str) -> tuple[float, float]:
    lo, hi = _floats(text, 2, "window")
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"window needs lo < hi, got {text!r}")
    return lo, hi


def parse_scan(text: str) -> tuple[str, float, float, int]:
    try:
        name, rng = str(text).split("=", 1)
        start, stop, count = rng.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"scan range must look like NAME=start:stop:count, got {text!r}") from exc
    name = name.strip()
    if name not in SCAN_PARAMS:
        raise argparse.ArgumentTypeError(f"unknown scan parameter {name!r}; choose from {', '.join(SCAN_PARAMS)}")
    if count < 1 or start > stop:
        raise argparse.ArgumentTypeError(f"scan range needs count >= 1 and start <= stop, got {text!r}")
    return name, start, stop, count


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _sign(text: str) -> int:
    value = int(text)
    if value not in (1, -1):
        raise argparse.ArgumentTypeError("sign must be 1 or -1")
    return value


def _bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


# flag -> (converter, built-in default)
OPTIONS = {
    "form": (str, "complex"),
    "q0": (float, None),
    "q1": (float, 0.0),
    "Q": (parse_quaternion, None),
    "V": (parse_complex, 0j),
    "U": (parse_quaternion, None),
    "E": (parse_complex, None),
    "K": (parse_complex, None),
    "bound": (_bool, False),
    "window": (parse_window, (-10.0, 10.0)),
    "out": (str, None),
    "format": (str, None),
    "seed": (int, 42),
    "draws": (int, DEFAULT_DRAWS),
    "hbar": (_positive, 1.0),
    "mass": (_positive, 1.0),
    "eig_sign": (_sign, 1),
    "scan": (parse_scan, []),
    "inject_fault": (str, None),
}


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, ``scan`` may repeat."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        conv = OPTIONS[key][0]
        try:
            parsed = conv(value)
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
        if key == "scan":
            out.setdefault("scan", []).append(parsed)
        else:
            out[key] = parsed
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdelta", description="Delta-potential solvers for complex and quaternionic wave equations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--form", choices=("complex", "left", "right"), default=None)
        p.add_argument("--q0", type=float, default=None, help="real part of the complex delta strength")
        p.add_argument("--q1", type=float, default=None, help="imaginary part of the complex delta strength")
        p.add_argument("--Q", type=parse_quaternion, default=None, help="quaternion strength a,b,c,d")
        p.add_argument("--V", type=parse_complex, default=None, help="complex background v0,v1")
        p.add_argument("--U", type=parse_quaternion, default=None, help="quaternion background a,b,c,d")
        p.add_argument("--E", type=parse_complex, default=None, help="energy e0,e1")
        p.add_argument("--K", type=parse_complex, default=None, help="incident wave number k0,k1")
        p.add_argument("--eig-sign", dest="eig_sign", type=_sign, default=None, help="+1 or -1: which eigenvalue branch")
        p.add_argument("--window", type=parse_window, default=None, help="lo,hi for expectation values")
        p.add_argument("--hbar", type=_positive, default=None, help="reduced Planck constant (default 1)")
        p.add_argument("--mass", type=_positive, default=None, help="particle mass (default 1)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None)

    solve = sub.add_parser("solve", help="solve one configuration")
    common(solve)
    solve.add_argument("--bound", action="store_const", const=True, default=None,
                       help="bound state of a real attractive delta")

    scan = sub.add_parser("scan", help="sweep parameters over a grid")
    common(scan)
    scan.add_argument("--scan", type=parse_scan, action="append", default=None,
                      help="NAME=start:stop:count, repeatable; NAME in " + ",".join(SCAN_PARAMS))

    verify = sub.add_parser("verify", help="run the oracle suite")
    common(verify)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--draws", type=int, default=None)
    verify.add_argument("--inject-fault", dest="inject_fault", choices=sorted(CHECKS), default=None,
                        help="corrupt one check to exercise the harness")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Flags override config-file values, which override built-in defaults."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    merged = {}
    for key, (_, default) in OPTIONS.items():
        flag = getattr(args, key, None)
        merged[key] = flag if flag is not None else cfg.get(key, default)
    if merged["form"] not in ("complex", "left", "right"):
        raise ConfigError(f"unknown form {merged['form']!r}")
    if merged["format"] not in (None, "csv", "json"):
        raise ConfigError(f"unknown format {merged['format']!r}")
    if merged["draws"] < 1:
        raise ConfigError("draws must be positive")
    merged["consts"] = PhysicalConstants(merged["hbar"], merged["mass"])
    return merged


# --- record helpers --------------------------------------------------------

def _cx(prefix: str, z: complex) -> dict:
    return {f"{prefix}_re": z.real, f"{prefix}_im": z.imag}


def _parts(K: complex, E: complex) -> dict:
    return {"K0": K.real, "K1": K.imag, "E0": E.real, "E1": E.imag}


def _quat(prefix: str, q: Quaternion) -> dict:
    return {f"{prefix}_{n}": v for n, v in zip("abcd", q.components)}


def _residuals(state, consts) -> dict:
    x_max, _ = default_extent(state)
    rep = pde_residual(state, x_max, 1e-3, 0.0, consts)
    return {"pde_residual_max": rep.pde_residual_max, "jump_residual": rep.jump_residual}


def _expectations(state, window, consts) -> dict:
    rep = expectation_closed_form(state, window, 0.0, consts)
    return {"norm_rho": rep.norm_rho, "norm_varrho": rep.norm_varrho, "energy": rep.energy,
            "momentum": rep.momentum, "momentum_sq": rep.momentum_sq, "potential": rep.potential,
            "conservation_residual": rep.conservation_residual}


def _strength(cfg) -> complex | None:
    if cfg["q0"] is None:
        return None
    return complex(cfg["q0"], cfg["q1"])


def _background(cfg) -> Quaternion:
    return cfg["U"] if cfg["U"] is not None else Quaternion(cfg["V"])


def solve_record(cfg: dict) -> dict:
    consts = cfg["consts"]
    form = cfg["form"]
    rec: dict = {"form": form}
    window = cfg["window"]
    if form == "complex":
        q = _strength(cfg)
        V = cfg["V"] if cfg["U"] is None else cfg["U"].z0
        if cfg["bound"]:
            if q is None:
                raise ConfigError("--bound needs --q0")
            b = cd.solve_bound_state(cd.ComplexPotential(q, V), consts)
            rec.update(kind="bound", **_parts(b.K, b.E), amplitude=b.amplitude)
            rec.update(_expectations(b, window, consts))
            rec["norm"] = rec["norm_rho"]
            rec.update(_residuals(b.as_state(), consts))
            return rec
        if cfg["K"] is not None:
            pot = cd.ComplexPotential(q if q is not None else 0j, V)
            s = cd.solve_scattering(cfg["K"], pot, consts)
            rec.update(kind="scattering", **_parts(s.K, s.E), calE0=s.calE0, **_cx("R", s.R), **_cx("T", s.T),
                       flux=s.flux_balance)
            rec["flux_formula"] = _flux_or_nan(s.K, pot.q, consts)
            rec.update(_residuals(s.as_state(), consts))
            return rec
        if cfg["E"] is not None:
            br = cd.solve_autonomous(cfg["E"], V, consts, cfg["eig_sign"])
            r1, r2 = br.residuals(consts)
            rec.update(kind="autonomous", **_parts(br.K, br.E), stationarity=str(cd.classify_stationarity(br.E, V)),
                       dispersion_residual=max(r1, r2))
            rec.update(_residuals(br.as_state(), consts))
            return rec
        raise ConfigError("complex solve needs --bound, --K or --E")

    U = _background(cfg)
    Q = cfg["Q"]
    if Q is None and cfg["q0"] is not None:
        Q = Quaternion(_strength(cfg))
    sign = cfg["eig_sign"]
    if cfg["K"] is not None and form == "left":
        if Q is None:
            raise ConfigError("left scattering needs --Q")
        s = ql.solve_scattering_left(cfg["K"], Q, U, consts, sign, cfg["E"])
        state = ql.scattering_state_left(cfg["K"], Q, U, consts, sign, cfg["E"])
        rec.update(kind="scattering", **_parts(s.K, s.E), **_cx("R", s.R), **_cx("T", s.T), flux=s.flux_balance)
        rec.update(_residuals(state, consts))
        return rec
    if Q is not None:
        solver = ql.solve_delta_left if form == "left" else qr.solve_delta_right
        br = solver(Q, U, consts, sign)
        state = ql.delta_state(br, Q, form)
        rec.update(kind="delta", **_parts(br.K, br.E), **_cx("A0", br.A0), **_cx("A1", br.A1),
                   eigen_residual=br.eigen_residual)
        sw = ql.sandwich_of(br, Q)
        rec.update(_quat("sandwich", sw))
        rec.update(_residuals(state, consts))
        return rec
    if cfg["E"] is not None:
        if form == "left":
            br = ql.solve_autonomous_left(cfg["E"], U, consts=consts, eig_sign=sign)
            cls = ql.classify_stationarity_left(br.E, U)
        else:
            br = qr.solve_autonomous_right(cfg["E"], U, consts, sign)
            cls = "Mixed" if qr.pure_mode_obstruction(br.E, U) else "Degenerate"
        rec.update(kind="autonomous", **_parts(br.K, br.E), **_cx("A0", br.A0), **_cx("A1", br.A1),
                   stationarity=str(cls), eigen_residual=br.eigen_residual)
        rec.update(_expectations(br.as_state(), window, consts))
        rec.update(_residuals(br.as_state(), consts))
        return rec
    raise ConfigError(f"{form} solve needs --Q, --K or --E")


def _flux_or_nan(K, q, consts) -> float:
    try:
        return cd.flux_formula(K, q, consts)
    except PoleAtG:
        return math.nan


# --- scan ------------------------------------------------------------------

def _scan_point(cfg: dict, values: dict) -> dict:
    consts = cfg["consts"]
    form = cfg["form"]
    E = cfg["E"] if cfg["E"] is not None else 0j
    E = complex(values.get("E0", E.real), values.get("E1", E.imag))
    U = _background(cfg)
    V = complex(values.get("V0", U.real), values.get("V1", U.z0.imag))
    U1 = complex(values["U1"]) if "U1" in values else U.z1
    U = Quaternion(V, U1)
    q = _strength(cfg) or 0j
    q = complex(values.get("q0", q.real), values.get("q1", q.imag))
    K = cfg["K"]
    if "k0" in values or "k1" in values:
        K = K if K is not None else 0j
        K = complex(values.get("k0", K.real), values.get("k1", K.imag))
    row: dict = {}
    if form == "complex" and K is not None:
        s = cd.solve_scattering(K, cd.ComplexPotential(q, V), consts)
        row.update(K0=s.K.real, K1=s.K.imag, stationarity=str(cd.classify_stationarity(s.E, V)),
                   flux=s.flux_balance, flux_formula=_flux_or_nan(s.K, q, consts), residual=0.0)
        return row
    if form == "complex":
        br = cd.solve_autonomous(E, V, consts, cfg["eig_sign"])
        row.update(K0=br.K.real, K1=br.K.imag, stationarity=str(cd.classify_stationarity(E, V)),
                   flux=math.nan, flux_formula=math.nan, residual=max(br.residuals(consts)))
        return row
    if form == "left":
        br = ql.solve_autonomous_left(E, U, consts=consts, eig_sign=cfg["eig_sign"])
        k1s = math.nan
        if E.imag**2 >= abs(U1) ** 2:
            k1s = ql.stationary_k1_squared(E.imag, V.real, abs(U1), consts)
        row.update(K0=br.K.real, K1=br.K.imag, stationarity=str(ql.classify_stationarity_left(E, U)),
                   K1_sq_stationary=k1s, residual=br.eigen_residual)
        return row
    br = qr.solve_autonomous_right(E, U, consts, cfg["eig_sign"])
    row.update(K0=br.K.real, K1=br.K.imag,
               stationarity="Mixed" if qr.pure_mode_obstruction(E, U) else "Degenerate",
               residual=br.eigen_residual)
    return row


def scan_rows(cfg: dict) -> list[dict]:
    ranges = cfg["scan"]
    if not ranges:
        raise ConfigError("scan needs at least one --scan NAME=start:stop:count")
    names = [r[0] for r in ranges]
    if len(set(names)) != len(names):
        raise ConfigError("each scan parameter may appear once")
    axes = [np.linspace(start, stop, count).tolist() for _, start, stop, count in ranges]
    rows = []
    for point in itertools.product(*axes):
        values = dict(zip(names, point))
        row = dict(values)
        try:
            row.update(_scan_point(cfg, values))
            row["error"] = ""
        except DeltaError as exc:
            row["error"] = type(exc).__name__
        rows.append(row)
    # rows that errored lack result columns; fill them so every row has the same keys
    keys = []
    for row in rows:
        for k in row:
            if k not in keys and k != "error":
                keys.append(k)
    keys.append("error")
    return [{k: row.get(k, math.nan) for k in keys} for row in rows]


# --- output ----------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, int):
        return str(value)
    return str(value)


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    keys = list(rows[0])
    writer.writerow(keys)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in keys])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_json_safe(v) for v in value]
    return value


def to_json(payload: dict) -> str:
    return json.dumps(_json_safe({"schema_version": SCHEMA_VERSION, **payload}), indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run(args) -> int:
    cfg = resolve(args)
    fmt = cfg["format"]
    if args.command == "solve":
        rec = solve_record(cfg)
        emit(to_csv([rec]) if fmt == "csv" else to_json({"command": "solve", "result": rec}), cfg["out"])
        return 0
    if args.command == "scan":
        rows = scan_rows(cfg)
        emit(to_json({"command": "scan", "rows": rows}) if fmt == "json" else to_csv(rows), cfg["out"])
        return 0
    report = run_verify(cfg["seed"], cfg["draws"], cfg["consts"], cfg["inject_fault"])
    if fmt == "json":
        checks = [{"name": c.name, "passed": c.passed, "informational": c.informational,
                   "max_residual": c.max_residual, "tolerance": c.tolerance, "samples": c.samples,
                   "detail": c.detail} for c in report.checks]
        text = to_json({"command": "verify", "seed": report.seed, "draws": report.draws,
                        "passed": report.passed, "checks": checks})
    elif fmt == "csv":
        text = to_csv([{"name": c.name, "status": c.line().split()[0], "max_residual": c.max_residual,
                        "tolerance": c.tolerance, "samples": c.samples} for c in report.checks])
    else:
        text = "\n".join(report.lines() + [f"overall: {'PASS' if report.passed else 'FAIL'}"]) + "\n"
    emit(text, cfg["out"])
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"ConfigError: {exc}", file=sys.stderr)
        return 2
    except DeltaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
