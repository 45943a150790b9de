"""Command-line front end.

Numbers are written as decimal strings at the working precision.  A JSON
config file given with ``--config`` supplies defaults for any flag of the
chosen subcommand (keys are flag names with dashes or underscores); flags on
the command line win.  A ``"command"`` key selects the subcommand when none
is given.  HYPERSTOKES_DIGITS sets the default precision.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath as mp

from . import __version__
from .coeffs import bernoulli, log_gamma_coeff, stirling_gamma
from .errors import HyperStokesError
from .surface import MIN_DIGITS, SurfacePoint, default_digits

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


# ------------------------------------------------------------- formatting

def num(x) -> str:
    return mp.nstr(mp.mpf(x), mp.mp.dps)


def cnum(x) -> dict:
    x = mp.mpc(x)
    return {"re": num(x.real), "im": num(x.imag)}


def parse_angle(text: str):
    """An angle in radians, or an exact multiple of pi written like '0.4pi' or '2/5pi'."""
    t = text.strip().replace(" ", "")
    if t.endswith("pi"):
        head = t[:-2].rstrip("*") or "1"
        if head == "-":
            head = "-1"
        try:
            return Fraction(head)
        except ValueError as exc:
            raise ConfigError(f"bad angle {text!r}") from exc
    try:
        return mp.mpf(t)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad angle {text!r}") from exc


def point(modulus: str, angle) -> SurfacePoint:
    r = mp.mpf(modulus)
    if not r > 0:
        raise ConfigError("modulus must be positive")
    if isinstance(angle, Fraction):
        return SurfacePoint.pi(r, angle)
    return SurfacePoint.polar(r, angle)


def _emit(payload, args, rows=None, header=None):
    """Write JSON (or CSV when rows are given and the format asks for it)."""
    if rows is not None and args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------- commands

def cmd_eval(args) -> int:
    from .hyper import remainder_level1, remainder_level2
    from .reference import remainder_level0

    z = point(args.z_mod, parse_angle(args.z_arg))
    if args.level == 0:
        rep = remainder_level0(z, args.N, args.variant)
    elif args.level == 1:
        rep = remainder_level1(z, args.N, _need(args.M, "M"), args.variant)
    else:
        rep = remainder_level2(z, args.N, _need(args.M, "M"), _need(args.K, "K"), args.variant,
                               tol=args.tol, workers=args.workers)
    out = {"level": rep.level, "truncation": list(rep.truncation.as_tuple()),
           "variant": rep.variant, "digits": mp.mp.dps,
           "partial_sum": cnum(rep.partial_sum), "remainder": cnum(rep.remainder),
           "oracle": cnum(rep.oracle), "est_abs_error": num(rep.est_abs_error)}
    _emit(out, args)
    return EXIT_OK


def _need(v, name):
    if v is None:
        raise ConfigError(f"--{name} is required at this level")
    return v


def _theta_grid(lo: Fraction, hi: Fraction, steps: int):
    if steps < 1 or not lo < hi:
        raise ConfigError("need theta-min < theta-max and steps >= 1")
    return [lo + (hi - lo) * Fraction(j, steps) for j in range(steps + 1)]


def cmd_smooth(args) -> int:
    from .hyper import stokes_multiplier_curve

    lo_default, hi_default = ((Fraction(3, 10), Fraction(3, 4)) if args.kind == "s2"
                              else (Fraction(1, 20), Fraction(19, 20)))
    lo = Fraction(args.theta_min) if args.theta_min is not None else lo_default
    hi = Fraction(args.theta_max) if args.theta_max is not None else hi_default
    steps = args.steps if args.steps is not None else int((hi - lo) * 200)
    grid = _theta_grid(lo, hi, steps)
    curve = stokes_multiplier_curve(args.absz, args.kind, [mp.pi * t for t in grid],
                                    digits=args.digits_override, workers=args.workers)
    header = ["theta_over_pi", "re_S", "im_S", "N", "M", "digits_used"]
    rows = []
    for t, s in zip(grid, curve.samples):
        with mp.workdps(curve.digits):
            rows.append([num(mp.mpf(t.numerator) / t.denominator), num(s.S.real), num(s.S.imag),
                         curve.N, curve.M, curve.digits])
    payload = {"absz": num(curve.absz), "kind": args.kind, "N": curve.N, "M": curve.M,
               "digits_used": curve.digits,
               "samples": [dict(zip(header[:3], r[:3])) for r in rows]}
    if args.format is None:
        args.format = "csv"
    _emit(payload, args, rows, header)
    return EXIT_OK


def _split(text, conv):
    return [conv(v) for v in str(text).split(",") if v.strip()]


def cmd_terminant(args) -> int:
    from .terminants import Estimate, TerminantSpec, evaluate, fm_quadrature

    orders = _split(args.orders, mp.mpmathify)
    angles = _split(args.singulant_args, parse_angle)
    mods = _split(args.singulant_mods, mp.mpf) if args.singulant_mods else [2 * mp.pi] * len(orders)
    if not (len(orders) == len(angles) == len(mods)) or not orders:
        raise ConfigError("orders, singulant-args and singulant-mods need equal, nonzero lengths")
    spec = TerminantSpec(tuple((N, point(m, a)) for N, a, m in zip(orders, angles, mods)))
    z = point(args.z_mod, parse_angle(args.z_arg))
    if args.method == "quad":
        est = fm_quadrature(z, spec, args.tol)
    else:
        v = evaluate(z, spec, args.method, args.tol)
        est = Estimate(v, abs(v) * mp.mpf(10) ** (-(mp.mp.dps - 5)))
    _emit({"value_re": num(mp.re(est.value)), "value_im": num(mp.im(est.value)),
           "err_estimate": num(est.error), "method": args.method, "digits": mp.mp.dps}, args)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    if args.max < 0:
        raise ConfigError("--max must be non-negative")
    rows = []
    for n in range(args.max + 1):
        g = stirling_gamma(n)
        lg = log_gamma_coeff(n) if n else None
        b = bernoulli(n)
        rows.append([n, g.numerator, g.denominator,
                     "" if lg is None else lg.numerator, "" if lg is None else lg.denominator,
                     b.numerator, b.denominator])
    header = ["n", "gamma_num", "gamma_den", "loggamma_num", "loggamma_den",
              "bernoulli_num", "bernoulli_den"]
    payload = [{"n": r[0], "gamma": [str(r[1]), str(r[2])],
                "loggamma": None if r[3] == "" else [str(r[3]), str(r[4])],
                "bernoulli": [str(r[5]), str(r[6])]} for r in rows]
    _emit(payload, args, rows, header)
    return EXIT_OK


def cmd_smoothing(args) -> int:
    from .smoothing import c_of_phi, erfc_polynomial

    phi = parse_angle(args.phi)
    phi = mp.pi * mp.mpf(phi.numerator) / phi.denominator if isinstance(phi, Fraction) else phi
    approx = erfc_polynomial(phi, mp.mpf(args.absz), args.m, args.variant)
    c = c_of_phi(phi) if args.variant == 41 else mp.conj(c_of_phi(-phi))
    terms = [{"k": list(p.k), "coefficient": f"{coef.numerator}/{coef.denominator}",
              "value": cnum(val)} for p, coef, val in approx.terms]
    _emit({"phi": num(phi), "m": args.m, "absz": num(args.absz), "variant": args.variant,
           "c": cnum(c), "terms": terms, "value": cnum(approx.value)}, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify

    suites = verify.SUITES if args.suite == "all" else [args.suite]
    checks = []
    for s in suites:
        checks.extend(verify.run_suite(s, count=args.count, seed=args.seed, tol=args.tol))
    ok = all(c.passed for c in checks)
    _emit({"suite": args.suite, "digits": mp.mp.dps, "passed": ok,
           "checks": [c.as_dict() for c in checks]}, args)
    for c in checks:
        if not c.passed:
            print(f"FAILED {c.name}: residual {mp.nstr(c.residual, 5)} > {mp.nstr(c.threshold, 3)}",
                  file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None,
                        help=f"working precision in decimal digits (>= {MIN_DIGITS}; "
                             "default HYPERSTOKES_DIGITS or 50)")
    common.add_argument("--tol", type=str, default=None,
                        help="quadrature tolerance in (0, 1e-4]; default 10^-(digits-15)")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=["json", "csv"], default=None,
                        help="output format where both are offered")
    common.add_argument("--workers", type=int, default=1, help="worker processes for parallel sweeps")
    common.add_argument("--config", default=None, help="JSON file of flag defaults")

    p = argparse.ArgumentParser(prog="hyperstokes",
                                description="Hyperasymptotics and Stokes smoothing for Gamma*(z).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    e = sub.add_parser("eval", parents=[common], help="exact remainders at levels 0-2")
    e.add_argument("--z-mod", required=True, help="|z|")
    e.add_argument("--z-arg", required=True, help="arg z in radians, or e.g. 0.4pi")
    e.add_argument("--level", type=int, choices=[0, 1, 2], default=0, help="re-expansion level")
    e.add_argument("--N", type=int, required=True, help="level-0 truncation")
    e.add_argument("--M", type=int, default=None, help="level-1 truncation")
    e.add_argument("--K", type=int, default=None, help="level-2 truncation")
    e.add_argument("--variant", choices=["gamma", "reciprocal"], default="gamma",
                   help="Gamma* or 1/Gamma*")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("smooth", parents=[common], help="modified Stokes multiplier curve")
    s.add_argument("--absz", default="5", help="|z| (default 5)")
    s.add_argument("--kind", choices=["s2", "s2tilde"], default="s2", help="which multiplier")
    s.add_argument("--theta-min", default=None, help="lower arg z in units of pi (e.g. 0.3)")
    s.add_argument("--theta-max", default=None, help="upper arg z in units of pi")
    s.add_argument("--steps", type=int, default=None,
                   help="number of intervals (default: spacing pi/200)")
    s.set_defaults(func=cmd_smooth)

    t = sub.add_parser("terminant", parents=[common], help="evaluate a hyperterminant")
    t.add_argument("--orders", required=True, help="N1,N2,...")
    t.add_argument("--singulant-args", required=True, help="arg sigma_k, radians or e.g. 0.5pi")
    t.add_argument("--singulant-mods", default=None, help="|sigma_k| (default 2 pi each)")
    t.add_argument("--z-mod", required=True, help="|z|")
    t.add_argument("--z-arg", required=True, help="arg z in radians, or e.g. 0.2pi")
    t.add_argument("--method", choices=["auto", "quad", "bell", "closed", "quad-rotate"],
                   default="auto", help="evaluation path")
    t.set_defaults(func=cmd_terminant)

    v = sub.add_parser("verify", parents=[common], help="run identity suites")
    v.add_argument("--suite", choices=["all", "howls", "connection", "oracle", "coeffs",
                                       "smoothing", "levels"], default="all", help="suite name")
    v.add_argument("--count", type=int, default=20, help="random cases per randomised check")
    v.add_argument("--seed", type=int, default=2024, help="random seed")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("coeffs", parents=[common], help="exact coefficient tables")
    c.add_argument("action", choices=["dump"], help="action")
    c.add_argument("--max", type=int, default=20, help="largest index")
    c.set_defaults(func=cmd_coeffs)

    m = sub.add_parser("smoothing", parents=[common], help="erfc-polynomial breakdown")
    m.add_argument("--phi", required=True, help="arg(sigma z), radians or e.g. 1pi")
    m.add_argument("--m", type=int, default=2, help="level m")
    m.add_argument("--absz", default="20", help="|sigma z|")
    m.add_argument("--variant", type=int, choices=[41, 45], default=41,
                   help="41: c(phi); 45: conj(c(-phi)) with alternating signs")
    m.set_defaults(func=cmd_smoothing)
    p._subs = sub.choices
    return p


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    cfg = _load_config(known.config)
    command = cfg.pop("command", None)
    if not any(a in parser._subs for a in argv):
        if command is None:
            raise ConfigError("no subcommand given on the command line or in the config")
        argv = [command] + list(argv)
    name = next(a for a in argv if a in parser._subs)
    sp = parser._subs[name]
    dests = {a.dest: a for a in sp._actions}
    for k, v in cfg.items():
        if k not in dests or k in ("help", "config"):
            raise ConfigError(f"unknown config key {k!r} for {name}")
        act = dests[k]
        if act.type is not None and v is not None:
            v = act.type(v)
        if act.choices is not None and v not in act.choices:
            raise ConfigError(f"config key {k!r}: {v!r} not in {list(act.choices)}")
        act.required = False
    sp.set_defaults(**{k: v for k, v in cfg.items()})
    return argv


def _precision(args):
    digits = args.digits if args.digits is not None else default_digits()
    if digits < MIN_DIGITS:
        raise ConfigError(f"--digits must be >= {MIN_DIGITS}")
    args.digits_override = args.digits
    if args.tol is not None:
        with mp.workdps(digits):
            tol = mp.mpf(args.tol)
        if not 0 < tol <= mp.mpf("1e-4"):
            raise ConfigError("--tol must lie in (0, 1e-4]")
        args.tol = tol
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    return digits


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_OK if exc.code == 0 else EXIT_CONFIG
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_CONFIG
        digits = _precision(args)
        with mp.workdps(digits):
            return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HyperStokesError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())
