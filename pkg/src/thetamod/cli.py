"""Command-line interface.

    thetamod psi 15
    thetamod build --n 6 --out q6.json --audit
    thetamod verify qn --n 6 --tau 0,1
    thetamod theta --q 0.1,0 --prec 128
    thetamod eliminate --homogeneous

Exit codes: 0 success, 1 a verification failed, 2 bad arguments or domain
errors, 3 no seed polynomial for the requested ``n``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import mpmath

from . import modular, numtheory, verify
from .polyring import SparsePoly, resultant_in
from .thetaeval import TAU_GRID, QPoint, as_complex, nome_from_tau, theta_eval

PRECISION_ENV = "THETAMOD_PRECISION"
EXIT_FAIL, EXIT_USAGE, EXIT_NO_SEED = 1, 2, 3


class UsageError(Exception):
    pass


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return 256
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None


def _precision(args) -> int:
    prec = args.prec if args.prec is not None else default_precision()
    if prec < 64:
        raise UsageError("precision must be at least 64 bits")
    return prec


def _complex_arg(text: str, prec: int):
    try:
        return as_complex(text, prec)
    except (ValueError, TypeError):
        raise UsageError(f"expected a complex number as 're,im', got {text!r}") from None


def _tau_arg(text: str, prec: int):
    tau = _complex_arg(text, prec)
    if tau.imag <= 0:
        raise UsageError(f"tau must have positive imaginary part, got {text!r}")
    return tau


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_seeds(paths) -> dict[int, modular.SeedRecord]:
    seeds = {}
    for p in paths or ():
        seed = modular.load_seed(p)
        modular.validate_seed(seed)
        seeds[seed.m] = seed
    return seeds


def _fmt(z, digits: int) -> str:
    if z.imag == 0:
        return mpmath.nstr(z.real, digits)
    sign = "+" if z.imag >= 0 else "-"
    return f"{mpmath.nstr(z.real, digits)} {sign} {mpmath.nstr(abs(z.imag), digits)}i"


# -- commands -------------------------------------------------------------------

def cmd_psi(args):
    print(numtheory.psi(args.n))


def cmd_omega(args):
    print(numtheory.omega(args.a, args.b))


def cmd_const_term(args):
    print(numtheory.constant_term(args.m))


def cmd_triplets(args):
    for t in numtheory.enumerate_triplets(args.n):
        print(f"{t.u} {t.v} {t.w}")


def cmd_build(args):
    if args.audit and not args.out:
        raise UsageError("--audit needs --out (intermediates are written next to it)")
    seeds = _load_seeds(args.seed)
    result = modular.build_qn(args.n, seeds=seeds or None, audit=args.audit)
    _write(result.Q.to_json(), args.out)
    if args.audit:
        out = Path(args.out)
        stem = out.name[:-len(out.suffix)] if out.suffix else out.name
        for i, step in enumerate(result.intermediates, start=1):
            for name in ("B", "D", "E", "Qtilde"):
                path = out.with_name(f"{stem}.step{i}.{name}.json")
                path.write_text(getattr(step, name).to_json())


def _identity_reports(args, prec):
    taus = [_tau_arg(t, prec) for t in args.tau] if args.tau else list(TAU_GRID)
    ident = args.identity
    if ident == "suite":
        config = verify.SuiteConfig(precision_bits=prec)
        if args.tau:
            config.taus = taus
        return verify.run_suite(config)
    needs_n = {"qn", "theoremC", "product"}
    if ident in needs_n and args.n is None:
        raise UsageError(f"'{ident}' needs --n")
    poly = None
    if ident == "qn":
        if args.poly:
            poly = SparsePoly.from_json(Path(args.poly).read_text()).with_variables(modular.VARS)
        elif args.seed:
            poly = modular.build_qn(args.n, seeds=_load_seeds(args.seed)).Q if args.n > 1 else None
    reports = []
    for tau in taus:
        if ident == "qn":
            reports.append(verify.check_qn_vanishing(args.n, tau, prec, poly=poly))
        elif ident == "theoremC":
            reports.append(verify.check_theoremC_fixture(args.n, tau, prec))
        elif ident == "product":
            reports.append(verify.check_product_formula(args.n, tau, prec))
        elif ident == "roots":
            if args.p is None or args.j is None:
                raise UsageError("'roots' needs --p and --j")
            reports.append(verify.check_root_of_unity_product(args.p, args.j, tau, prec))
        elif ident == "homogeneous":
            reports.append(verify.check_homogeneous_relation(
                tau, prec, corrected=args.variant == "corrected"))
        elif ident == "jacobi":
            reports.append(verify.check_jacobi_identity(tau, prec))
        elif ident == "duplication":
            reports.append(verify.check_duplication(tau, prec))
        elif ident == "triple-product":
            reports.append(verify.check_triple_product(tau, prec))
    return reports


def cmd_verify(args):
    prec = _precision(args)
    reports = _identity_reports(args, prec)
    _write(verify.reports_to_jsonl(reports), args.out)
    return verify.suite_exit_status(reports)


def cmd_theta(args):
    prec = _precision(args)
    if (args.q is None) == (args.tau is None):
        raise UsageError("give exactly one of --q or --tau")
    if args.tau is not None:
        point = nome_from_tau(_tau_arg(args.tau, prec), prec)
    else:
        q = _complex_arg(args.q, prec)
        if abs(q) >= 1:
            raise UsageError("|q| must be < 1")
        point = QPoint(q, prec)
    values = theta_eval(point)
    digits = max(1, int(prec * math.log10(2)))
    print(f"theta2 = {_fmt(values.theta2, digits)}")
    print(f"theta3 = {_fmt(values.theta3, digits)}")
    print(f"theta4 = {_fmt(values.theta4, digits)}")
    print(f"trunc_error_bound = {mpmath.nstr(values.trunc_error_bound, 5)}")


def cmd_eliminate(args):
    if args.homogeneous:
        elim = modular.homogeneous_eliminant(args.m, seeds=_load_seeds(args.seed) or None)
        _write(elim.eliminant.to_json(), args.out)
        for name, cofactor in elim.divisors.items():
            if cofactor is None:
                msg = f"{name} degree-8 relation: does not divide the eliminant"
            else:
                msg = f"{name} degree-8 relation: divides the eliminant, cofactor {cofactor}"
            print(msg, file=sys.stderr)
        return 0
    if not (args.first and args.second and args.var):
        raise UsageError("give two polynomial files and --var, or --homogeneous")
    p = SparsePoly.from_json(Path(args.first).read_text())
    q = SparsePoly.from_json(Path(args.second).read_text())
    if q.variables != p.variables:
        merged = tuple(dict.fromkeys(p.variables + q.variables))
        p, q = p.with_variables(merged), q.with_variables(merged)
    _write(resultant_in(p, q, args.var).to_json(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetamod", description="Modular equations for theta constants.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("psi", help="Dedekind psi(n)")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("omega", help="omega(a, b)")
    s.add_argument("a", type=int)
    s.add_argument("b", type=int)
    s.set_defaults(func=cmd_omega)

    s = sub.add_parser("const-term", help="constant term P_m(0, Y) for odd m >= 3")
    s.add_argument("m", type=int)
    s.set_defaults(func=cmd_const_term)

    s = sub.add_parser("triplets", help="index triplets (u, v, w) of n")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_triplets)

    s = sub.add_parser("build", help="construct Q_n as polynomial JSON")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", action="append", help="seed polynomial file (repeatable)")
    s.add_argument("--out")
    s.add_argument("--audit", action="store_true",
                   help="also write B, D, E, Qtilde of every doubling step")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", help="numerically check an identity")
    s.add_argument("identity", choices=["qn", "theoremC", "product", "roots", "homogeneous",
                                        "jacobi", "duplication", "triple-product", "suite"])
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--j", type=int)
    s.add_argument("--tau", action="append", help="'re,im' (repeatable; default: fixed grid)")
    s.add_argument("--prec", type=int)
    s.add_argument("--poly", help="polynomial JSON to check instead of building Q_n")
    s.add_argument("--seed", action="append")
    s.add_argument("--variant", choices=["printed", "corrected"], default="corrected")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("theta", help="evaluate theta_2, theta_3, theta_4")
    s.add_argument("--q")
    s.add_argument("--tau")
    s.add_argument("--prec", type=int)
    s.set_defaults(func=cmd_theta)

    s = sub.add_parser("eliminate", help="resultant of two polynomial files")
    s.add_argument("first", nargs="?")
    s.add_argument("second", nargs="?")
    s.add_argument("--var")
    s.add_argument("--homogeneous", action="store_true",
                   help="eliminate theta_4/theta_3 between P_2 and P_m")
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--seed", action="append")
    s.add_argument("--out")
    s.set_defaults(func=cmd_eliminate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args) or 0
    except modular.NoSeedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SEED
    except (UsageError, ValueError, KeyError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
