"""Command-line front end: sweeps, method cross-checks and machine-readable
reports.

Exit codes: 0 ok, 1 usage, 2 physics constraint, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import correlation as cf
from . import kinematics as kin
from . import spectral, thermo, validate
from .constants import SPEED_OF_LIGHT
from .errors import NumericalError, PhysicsConstraintError, PoleError
from .field import mc_correlation
from .spectrum import Spectrum

EXIT_OK, EXIT_USAGE, EXIT_PHYSICS, EXIT_NUMERIC = 0, 1, 2, 3

HEADER = ("command", "beta", "gamma", "delta", "method", "value", "std_error", "units", "seed")

CF_METHODS = ("closed", "quadrature", "mc")
DISCRETE_METHODS = ("total", "thermal", "truncated", "mc")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Row:
    command: str
    beta: float
    gamma: float
    delta: float
    method: str
    value: float
    std_error: float
    units: str
    seed: int | None = None

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in HEADER}


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return "%.17g" % float(x)
    return str(x)


def emit_report(rows: list[Row], fmt: str, out: str | Path | None) -> str:
    """Serialize rows as CSV or JSON; write to ``out`` (or return text for stdout)."""
    if not rows:
        raise ValueError("no rows to report")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HEADER)
        for r in rows:
            w.writerow([_fmt(getattr(r, k)) for k in HEADER])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([{k: (float(v) if isinstance(v, np.floating) else v) for k, v in r.as_dict().items()}
                           for r in rows], indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is not None:
        Path(out).write_text(text)
    return text


# --- argument handling -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _band(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("band must be kmin:kmax") from None
    return lo, hi


def _sweep(text: str) -> list[float]:
    try:
        a, b, n = text.split(":")
        return list(np.linspace(float(a), float(b), int(n)))
    except ValueError:
        raise argparse.ArgumentTypeError("sweep must be start:stop:count") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help="flat key=value file; command-line flags win")
    g.add_argument("--omega", type=float, default=1.0, help="angular velocity (rad/s with --si)")
    geo = g.add_mutually_exclusive_group()
    geo.add_argument("--radius", type=float, help="circle radius (m with --si)")
    geo.add_argument("--beta", type=float, help="speed in units of c")
    g.add_argument("--si", action="store_true", help="SI inputs and outputs")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--out", help="output file (default: standard output)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--tolerance", type=float, default=1e-12, help="relative quadrature tolerance")

    p = _Parser(prog="rotzpf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tetrad", parents=[common], help="tetrad legs along the worldline")
    t.add_argument("--tau", type=_float_list, default=[0.0], help="comma-separated proper times")

    c = sub.add_parser("cf", parents=[common], help="continuous-spectrum correlation functions")
    c.add_argument("--component", default="E11", help="E11, H23, EH13, ... or S (scalar)")
    c.add_argument("--delta", type=_float_list, default=[1.0], help="comma-separated lags Omega*gamma*dtau")
    c.add_argument("--methods", default="closed,quadrature")
    c.add_argument("--band", type=_band, help="kmin:kmax (units of Omega/c); required for mc")
    c.add_argument("--realizations", type=int, default=200)
    c.add_argument("--modes", type=int, default=128, help="wavevectors per realization")

    d = sub.add_parser("discrete", parents=[common], help="discrete-spectrum (periodic) correlation functions")
    d.add_argument("--component", default="E11", choices=("E11", "S"))
    d.add_argument("--delta", type=_float_list, default=[1.0])
    d.add_argument("--methods", default="total,thermal")
    d.add_argument("--nmax", type=int, help="truncation for the truncated and mc methods")
    d.add_argument("--realizations", type=int, default=200)
    d.add_argument("--modes", type=int, default=16, help="directions per shell")

    e = sub.add_parser("energy", parents=[common], help="thermal energy densities")
    e.add_argument("--radius-sweep", type=_sweep, help="start:stop:count radii at fixed omega")
    e.add_argument("--field", choices=("em", "scalar", "both"), default="em")

    sub.add_parser("validate", parents=[common], help="run the invariant suite")
    return p


def _read_config(path: str) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k.replace("-", "_")] = v
    return out


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _read_config(args.config)
        cmd_parser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in cmd_parser._actions}
        for key in cfg:
            if key not in known or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r}")
        # re-parse with config values as defaults so explicit flags win
        converted = {}
        for key, raw in cfg.items():
            act = known[key]
            if isinstance(act, argparse._StoreTrueAction):
                converted[key] = raw.lower() in ("1", "true", "yes", "on")
            else:
                try:
                    converted[key] = act.type(raw) if act.type else raw
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    raise UsageError(f"config key {key!r}: {exc}") from None
        cmd_parser.set_defaults(**converted)
        args = parser.parse_args(argv)
        if args.radius is not None and args.beta is not None:
            raise UsageError("--radius and --beta are mutually exclusive")
    return args


def _params(args) -> kin.RotationParams:
    c = SPEED_OF_LIGHT if args.si else 1.0
    if args.beta is not None:
        return kin.RotationParams.from_beta(args.beta, omega=args.omega, c=c)
    radius = args.radius if args.radius is not None else 0.0
    return kin.RotationParams(args.omega, radius, c)


def _methods(text: str, allowed) -> list[str]:
    ms = [m.strip() for m in text.split(",") if m.strip()]
    if not ms:
        raise UsageError("select at least one method")
    bad = [m for m in ms if m not in allowed]
    if bad:
        raise UsageError(f"unknown method(s) {bad}; choose from {list(allowed)}")
    return ms


# --- commands --------------------------------------------------------------------

def _failed(command, p, delta, method, units, seed=None) -> Row:
    return Row(command, p.beta, p.gamma, delta, f"{method}:FAILED", math.nan, math.nan, units, seed)


def run_tetrad(args) -> list[Row]:
    p = _params(args)
    rows = []
    for tau in sorted(args.tau):
        alpha = float(p.phase(tau))
        for kind, tet in (("frenet-serret", kin.frenet_serret_tetrad(p, tau)),
                          ("fermi-walker", kin.fermi_walker_tetrad(p, tau))):
            for a in range(1, 5):
                for i in range(1, 5):
                    rows.append(Row("tetrad", p.beta, p.gamma, alpha, f"{kind}:mu{a}^{i}",
                                    float(tet[a][i - 1]), 0.0, "1"))
            rows.append(Row("tetrad", p.beta, p.gamma, alpha, f"{kind}:orthonormality-residual",
                            kin.orthonormality_residual(tet), 0.0, "1"))
    return rows


def _cf_units(scalar: bool, si: bool) -> str:
    if si:
        return "J/m" if scalar else "J/m^3"
    return "hbar*Omega^2/c" if scalar else "hbar*Omega^4/c^3"


def run_cf(args) -> tuple[list[Row], bool]:
    p = _params(args)
    methods = _methods(args.methods, CF_METHODS)
    scalar = args.component.strip().upper() == "S"
    comp = None if scalar else cf.CFComponentId.parse(args.component)
    if "mc" in methods and args.band is None:
        raise UsageError("the mc method needs --band kmin:kmax")
    if "closed" in methods and not scalar and str(comp) != "EE11":
        raise UsageError("a closed form exists for E11 and S only")
    band = Spectrum.continuous(*args.band) if args.band else Spectrum.continuous()
    units = _cf_units(scalar, args.si)
    conv = (lambda v: cf.scalar_cf_to_si(v, p.omega)) if scalar else (lambda v: cf.em_cf_to_si(v, p.omega))
    conv = conv if args.si else (lambda v: v)
    # lags and MC runs are nondimensional whatever the input unit system
    rows, failed = [], False
    for delta in sorted(args.delta):
        lag = cf.CFLagParams(delta, p.beta)
        for m in methods:
            name = {"closed": "closed-form", "quadrature": "quadrature", "mc": "monte-carlo"}[m]
            seed = args.seed if m == "mc" else None
            try:
                if m == "closed":
                    v = cf.scalar_cf_closed(kin.RotationParams.from_beta(p.beta), delta / p.gamma) if scalar \
                        else cf.em_cf_closed_E11(lag)
                    err = 0.0
                elif m == "quadrature":
                    res = (cf.scalar_cf_quadrature(lag, spectrum=band, rtol=args.tolerance) if scalar
                           else cf.em_cf_quadrature(comp, lag, spectrum=band, rtol=args.tolerance))
                    v, err = res.value, 0.0
                else:
                    nd = kin.RotationParams.from_beta(p.beta)
                    res = mc_correlation("S" if scalar else comp, nd, 0.0, delta / nd.gamma,
                                         args.realizations, band, n_modes=args.modes, seed=args.seed)
                    v, err = res.value, res.std_error
                rows.append(Row("cf", p.beta, p.gamma, delta, name, conv(v), abs(conv(err)), units, seed))
            except (PoleError, NumericalError) as exc:
                print(f"cf: {name} failed at delta={delta!r}: {exc}", file=sys.stderr)
                rows.append(_failed("cf", p, delta, name, units, seed))
                failed = True
    return rows, failed


def run_discrete(args) -> tuple[list[Row], bool]:
    p = _params(args)
    methods = _methods(args.methods, DISCRETE_METHODS)
    scalar = args.component == "S"
    if any(m in ("truncated", "mc") for m in methods) and args.nmax is None:
        raise UsageError("the truncated and mc methods need --nmax")
    units = _cf_units(scalar, args.si)
    conv = (lambda v: cf.scalar_cf_to_si(v, p.omega)) if scalar else (lambda v: cf.em_cf_to_si(v, p.omega))
    conv = conv if args.si else (lambda v: v)
    fn = spectral.discrete_scalar_cf if scalar else spectral.discrete_em_cf_E11
    rows, failed = [], False
    for delta in sorted(args.delta):
        lag = cf.CFLagParams(delta, p.beta)
        for m in methods:
            name = {"total": "discrete-sum", "thermal": "discrete-thermal", "truncated": "truncated-sum",
                    "mc": "monte-carlo"}[m]
            seed = args.seed if m == "mc" else None
            try:
                if m == "total":
                    v, err = fn(lag, rtol=args.tolerance).value, 0.0
                elif m == "thermal":
                    v, err = fn(lag, part="thermal", rtol=args.tolerance).value, 0.0
                elif m == "truncated":
                    v, err = fn(lag, n_max=args.nmax, rtol=args.tolerance).value, 0.0
                else:
                    nd = kin.RotationParams.from_beta(p.beta)
                    res = mc_correlation("S" if scalar else "E11", nd, 0.0, delta / nd.gamma, args.realizations,
                                         Spectrum.discrete(args.nmax), n_modes=args.modes, seed=args.seed)
                    v, err = res.value, res.std_error
                rows.append(Row("discrete", p.beta, p.gamma, delta, name, conv(v), abs(conv(err)), units, seed))
            except (PoleError, NumericalError) as exc:
                print(f"discrete: {name} failed at delta={delta!r}: {exc}", file=sys.stderr)
                rows.append(_failed("discrete", p, delta, name, units, seed))
                failed = True
    return rows, failed


def run_energy(args) -> list[Row]:
    c = SPEED_OF_LIGHT if args.si else 1.0
    if args.radius_sweep is not None:
        if args.beta is not None or args.radius is not None:
            raise UsageError("--radius-sweep excludes --radius and --beta")
        plist = [kin.RotationParams(args.omega, float(r), c) for r in sorted(args.radius_sweep)]
    else:
        plist = [_params(args)]
    kinds = ("em", "scalar") if args.field == "both" else (args.field,)
    units = "J/m^3" if args.si else "hbar*Omega^4/c^3"
    rows = []
    for p in plist:
        for kind in kinds:
            rep = thermo.em_density_rotating(p) if kind == "em" else thermo.scalar_density_rotating(p)
            assembled = (thermo.em_density_assembled(p.beta) if kind == "em"
                         else thermo.scalar_density_assembled(p.beta))
            scale = rep.thermal_value / rep.thermal_value_nondim
            value = rep.thermal_value if args.si else rep.thermal_value_nondim
            rows.append(Row("energy", p.beta, p.gamma, 0.0, f"{kind}:thermal", value, 0.0, units))
            rows.append(Row("energy", p.beta, p.gamma, 0.0, f"{kind}:thermal-assembled",
                            assembled * scale if args.si else assembled, 0.0, units))
            rows.append(Row("energy", p.beta, p.gamma, 0.0, f"{kind}:masking-factor", rep.masking_factor, 0.0, "1"))
        if args.si:
            rows.append(Row("energy", p.beta, p.gamma, 0.0, "t-rot", thermo.t_rot(p.omega).kelvin, 0.0, "K"))
    return rows


def run_validate(args) -> tuple[str, bool]:
    checks = validate.run_suite(args.seed)
    ok = all(c.passed for c in checks)
    if args.format == "json":
        text = json.dumps([{"check": c.name, "max_residual": c.residual, "tolerance": c.tolerance,
                            "passed": c.passed} for c in checks], indent=1) + "\n"
    else:
        text = validate.format_report(checks, args.seed)
    return text, ok


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    failed = False
    try:
        if args.command == "validate":
            text, ok = run_validate(args)
            failed = not ok
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK if ok else EXIT_NUMERIC
        if args.command == "tetrad":
            rows = run_tetrad(args)
        elif args.command == "cf":
            rows, failed = run_cf(args)
        elif args.command == "discrete":
            rows, failed = run_discrete(args)
        else:
            rows = run_energy(args)
        text = emit_report(rows, args.format, args.out)
        if args.out is None:
            sys.stdout.write(text)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhysicsConstraintError as exc:
        print(f"physics constraint violated: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except (NumericalError, PoleError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_NUMERIC if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
