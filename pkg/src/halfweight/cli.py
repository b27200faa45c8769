"""Command-line front end.

    halfweight theta --prec 10
    halfweight unit --variant zeta --l 3 --prec 8
    halfweight adjust --cusp half --k 1 --input raw.json
    halfweight hecke t2 --level 4 --k 1 --l 3 --input theta.json
    halfweight hecke u --level 12 --k 1 --l 3 --input a.json
    halfweight hecke up2 --p 3 --input a.json
    halfweight hecke verify-oracle --level 4 --k 3 --l 3
    halfweight hecke integrality --p 5
    halfweight cusps 20
    halfweight sigma 20 1
    halfweight scan --k 1 --max 400
    halfweight degrees 20
    halfweight verify all

Series travel as JSON in the QSeries schema; ``--input -`` reads stdin.
Exit status: 0 success, 1 failed check or computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import cuspgeom, heckeops, suites
from .cyclonum import zeta
from .qlaurent import QSeries, format_series
from .thetaforms import (
    FourTorsionClass,
    GenericM,
    PrimeLevel,
    SubgroupZeta,
    SubgroupZetaQ,
    adjust_expansion,
    theta_at_4torsion,
    theta_unit,
)

DEFAULT_PREC = 100


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="halfweight", description="half-integral weight q-expansion toolkit")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("theta", help="theta at a cusp of X_1(4), optionally to a power")
    _common(p)
    p.add_argument("--prec", type=int, default=DEFAULT_PREC)
    p.add_argument("--cusp", default="inf", help="inf, half, zero-0, zero-1 or zero-3")
    p.add_argument("--k", type=int, default=1, help="power of theta")

    p = sub.add_parser("unit", help="expansion of a modular unit Theta_m")
    _common(p)
    p.add_argument("--variant", required=True, choices=["generic", "zeta", "zetaq", "prime"])
    p.add_argument("--prec", type=int, default=DEFAULT_PREC)
    p.add_argument("--m", type=int, help="odd level m (generic)")
    p.add_argument("--l", type=int, help="odd prime l (zeta, zetaq, prime)")
    p.add_argument("--t", type=int, default=None, help="root-of-unity exponent")

    p = sub.add_parser("adjust", help="multiply a raw expansion by theta_P^k")
    _common(p)
    p.add_argument("--cusp", default="inf")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--input", required=True)

    hecke = sub.add_parser("hecke", help="Hecke operators")
    hsub = hecke.add_subparsers(dest="op", required=True, parser_class=_Parser)
    for name, needs in [("t2", "l"), ("u", "l"), ("up2", "p")]:
        h = hsub.add_parser(name)
        _common(h)
        h.add_argument("--input", required=True)
        if name != "up2":
            h.add_argument("--level", type=int, required=True)
            h.add_argument("--k", type=int, required=True)
        h.add_argument(f"--{needs}", type=int, required=True)
        if name == "u":
            h.add_argument("--zeta-index", type=int, default=1,
                           help="use zeta_{4N}^j as the primitive root (default 1)")
    h = hsub.add_parser("verify-oracle")
    _common(h)
    h.add_argument("--level", type=int, required=True)
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--l", type=int, required=True)
    h.add_argument("--prec", type=int, default=suites.ORACLE_PREC)
    h = hsub.add_parser("integrality")
    _common(h)
    h.add_argument("--p", type=int, required=True)
    h.add_argument("--prec", type=int, default=suites.INTEGRALITY_PREC)

    p = sub.add_parser("cusps", help="cusps of Gamma_1(M)")
    _common(p)
    p.add_argument("level", type=int)

    p = sub.add_parser("sigma", help="the divisor Sigma_{4N,k}")
    _common(p)
    p.add_argument("level", type=int)
    p.add_argument("k", type=int)

    p = sub.add_parser("scan", help="first level where the base-change inequality fails")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max", type=int, default=400)

    p = sub.add_parser("degrees", help="degree identities on X_1(4N)")
    _common(p)
    p.add_argument("level", type=int)

    p = sub.add_parser("verify", help="run self-check suites")
    _common(p)
    p.add_argument("suite", nargs="?", default="all",
                   choices=[*suites.SUITES, "all"])
    return parser


# ---------------------------------------------------------------------------

def _read_series(path: str) -> QSeries:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return QSeries.from_json(json.loads(text))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit_series(args, series: QSeries, out) -> int:
    if args.json:
        print(_dump(series.to_json()), file=out)
    else:
        print(format_series(series), file=out)
    return 0


def _unit_variant(args):
    t = args.t
    if args.variant == "generic":
        if args.m is None:
            raise UsageError("unit --variant generic needs --m")
        return GenericM(args.m, t or 0)
    if args.l is None:
        raise UsageError(f"unit --variant {args.variant} needs --l")
    if args.variant == "zeta":
        return SubgroupZeta(args.l)
    if args.variant == "zetaq":
        return SubgroupZetaQ(args.l, 1 if t is None else t)
    return PrimeLevel(args.l, 1 if t is None else t)


def _run_hecke(args, out) -> int:
    op = args.op
    if op == "integrality":
        r = heckeops.check_unit_integrality(args.p, args.prec)
        if args.json:
            print(_dump(r.to_json()), file=out)
        else:
            for name, v in r.minima.items():
                print(f"{name:16s} min valuation {v}", file=out)
            print("integral" if r.passed else "NOT integral", file=out)
        return 0 if r.passed else 1
    if op == "verify-oracle":
        report = suites.Report("oracle")
        suites.oracle_cases(report, args.level, args.k, args.l, args.prec)
        return _emit_reports(args, [report], out)
    A = _read_series(args.input)
    if op == "up2":
        return _emit_series(args, heckeops.u_p2(A, args.p), out)
    ctx = heckeops.HeckeContext(args.level, args.k)
    if op == "t2":
        return _emit_series(args, heckeops.t_l2_closed(A, ctx, args.l), out)
    return _emit_series(args, heckeops.u_l_closed(A, ctx, args.l, zeta(args.level, args.zeta_index)), out)


def _emit_reports(args, reports, out) -> int:
    if args.json:
        print(_dump([r.to_json() for r in reports]), file=out)
    else:
        for r in reports:
            print(r.render(), file=out)
    return 0 if all(r.ok for r in reports) else 1


def _dispatch(args, out) -> int:
    verb = args.verb
    if verb == "theta":
        cusp = FourTorsionClass.parse(args.cusp)
        series = theta_at_4torsion(cusp, args.prec)
        return _emit_series(args, series ** args.k if args.k != 1 else series, out)
    if verb == "unit":
        return _emit_series(args, theta_unit(_unit_variant(args), args.prec), out)
    if verb == "adjust":
        raw = _read_series(args.input)
        return _emit_series(args, adjust_expansion(raw, FourTorsionClass.parse(args.cusp), args.k), out)
    if verb == "hecke":
        return _run_hecke(args, out)
    if verb == "cusps":
        cusps = cuspgeom.enumerate_cusps(args.level)
        if args.json:
            print(_dump({"level": args.level, "cusps": [c.to_json() for c in cusps]}), file=out)
        else:
            print(f"{len(cusps)} cusps of Gamma_1({args.level})", file=out)
            for c in cusps:
                half = args.level % 4 == 0 and cuspgeom.maps_to_half(c)
                print(f"  {c.label():>8s}  width {c.width:4d}{'  over 1/2' if half else ''}", file=out)
        return 0
    if verb == "sigma":
        D = cuspgeom.sigma_divisor(args.level, args.k)
        if args.json:
            payload = D.to_json()
            payload["floor_degree"] = cuspgeom.floor_degree(D)
            print(_dump(payload), file=out)
        else:
            for c, v in sorted(D.coefficients.items(), key=lambda cv: cv[0].key):
                print(f"  {c.label():>8s}  {v}", file=out)
            print(f"degree {D.degree()}, floor degree {cuspgeom.floor_degree(D)}", file=out)
        return 0
    if verb == "scan":
        level = cuspgeom.counterexample_scan(args.k, args.max)
        if args.json:
            print(_dump({"k": args.k, "max": args.max, "first_failure": level}), file=out)
        else:
            print(f"first failure: {level if level is not None else 'none'}", file=out)
        return 0
    if verb == "degrees":
        r = cuspgeom.degree_identities(args.level)
        if args.json:
            print(_dump(r.to_json()), file=out)
        else:
            print(f"level {r.level}: genus {r.genus}, {r.cusp_count} cusps, index {r.index}", file=out)
            print(f"  fiber width sums   {r.fiber_width_sums}", file=out)
            print(f"  fiber degrees      { {k: str(v) for k, v in r.fiber_ramification_sums.items()} }", file=out)
            for name, ok in r.checks:
                print(f"  {'ok  ' if ok else 'FAIL'} {name}", file=out)
        return 0 if r.passed else 1
    if verb == "verify":
        return _emit_reports(args, suites.verify(args.suite), out)
    raise UsageError(f"unknown verb {verb!r}")  # pragma: no cover


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError, ArithmeticError, OSError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
