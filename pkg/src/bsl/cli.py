"""Command line entry point: `bsl <subcommand> ...`.

Exit status is 0 on success, 1 on a validation error (bad flags, p not prime,
malformed rationals, inadmissible parameters) and 2 when a verification suite
reports a failure.  Output goes to --out or stdout; the same flags always give
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from sympy import isprime

from . import __version__

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed rational {s!r}") from None


def _prime(s: str) -> int:
    try:
        p = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"p must be an integer, got {s!r}") from None
    if not isprime(p):
        raise argparse.ArgumentTypeError(f"p = {p} is not prime")
    return p


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get("BSL_WORKERS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"BSL_WORKERS must be an integer, got {env!r}") from None


def _d_range(args) -> list[int]:
    if args.d is not None:
        return [args.d]
    if args.d_min is None or args.d_max is None:
        raise UsageError("give --d or both --d-min and --d-max")
    if args.d_min < 1 or args.d_max < args.d_min:
        raise UsageError("need 1 <= d-min <= d-max")
    return list(range(args.d_min, args.d_max + 1))


def _extra(args, kind: str) -> int | None:
    from .families import normalize_kind

    kind = normalize_kind(kind)
    if kind == "genus_g":
        return args.g if args.g is not None else 1
    if kind == "superelliptic":
        if args.r is None:
            raise UsageError("superelliptic needs --r")
        return args.r
    return None


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- subcommands


def cmd_families(args) -> int:
    from .families import CSV_HEADER, bs_scan

    res = bs_scan(args.kind, args.p, _d_range(args), _extra(args, args.kind), _workers(args))
    if args.format == "json":
        rows = [dict(zip(CSV_HEADER, r.csv_row())) for r in res.rows]
        _emit(args, _json({"rows": rows, "skipped": [[d, why] for d, why in res.skipped]}))
    else:
        _emit(args, _csv(CSV_HEADER, [r.csv_row() for r in res.rows]))
    return EXIT_OK


def cmd_orbits(args) -> int:
    from .families import FamilySpec, contributing_orbits
    from .orbit_kit import orbits_json

    if args.d is None:
        raise UsageError("orbits needs --d")
    F = FamilySpec(args.kind, args.p, args.d, _extra(args, args.kind))
    out = orbits_json(contributing_orbits(F), F.d, F.p)
    out["kind"] = F.kind
    out["dim_sha"] = sum(o["d"] for o in out["orbits"])
    _emit(args, _json(out))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .dieudonne_oracle import legendre_dieudonne, random_dieudonne, verify_orbit_formula

    n_values = None if args.n is None else [args.n, args.n + 1, args.n + 2]
    if args.preset == "legendre":
        if args.d is None:
            raise UsageError("the legendre preset needs --d")
        if args.p == 2 or args.d % args.p == 0:
            raise UsageError("the legendre preset needs p odd and coprime to d")
        datas = [legendre_dieudonne(args.p, args.d, args.seed)]
    else:
        datas = [random_dieudonne(args.seed + i, args.p, args.max_size) for i in range(args.instances)]
    nus = (args.nu,)
    reports = []
    ok = True
    for k, D in enumerate(datas):
        R = verify_orbit_formula(D, n_values, nus)
        ok &= R.passed
        reports.append({
            "instance": k,
            "fv_ok": R.fv_ok,
            "direct_sum": [[n, nu, a, b] for (n, nu), (a, b) in sorted(R.direct_sum.items())],
            "orbits": [r.to_json() for r in R.orbit_reports],
            "pass": R.passed,
        })
    out = {"preset": args.preset, "p": args.p, "d": args.d, "nu": args.nu, "seed": args.seed,
           "instances": reports, "pass": ok}
    _emit(args, _json(out))
    return EXIT_OK if ok else EXIT_FAILED


def _lfunction_json(args) -> tuple[dict, bool]:
    from .families import FamilySpec, dim_sha, normalize_kind
    from .lfunction import slope_report

    if args.d is None:
        raise UsageError("needs --d")
    kind = normalize_kind(args.kind)
    extra = _extra(args, kind)
    if kind == "genus_g" and extra != 1:
        raise UsageError("the L-function model for genus_g exists for g = 1 only")
    if kind not in ("legendre", "genus_g", "sextic"):
        raise UsageError(f"no Weierstrass model for {kind}")
    orbit_dim = dim_sha(FamilySpec(kind, args.p, args.d, extra))
    rep = slope_report(kind, args.p, args.d, args.q, _workers(args))
    out = rep.to_json(orbit_dim)
    return out, out["match"] and rep.checks.ok


def cmd_lfunction(args) -> int:
    out, ok = _lfunction_json(args)
    _emit(args, _json(out))
    return EXIT_OK if out["checks_ok"] else EXIT_FAILED


def cmd_crosscheck(args) -> int:
    out, ok = _lfunction_json(args)
    _emit(args, _json({"kind": out["kind"], "p": out["p"], "d": out["d"], "q": out["q"],
                       "dim_sha_orbits": out["dim_sha_orbits"], "dim_sha_slopes": out["dim_sha_slopes"],
                       "checks_ok": out["checks_ok"], "match": out["match"], "pass": ok}))
    return EXIT_OK if ok else EXIT_FAILED


def cmd_equidist(args) -> int:
    from .equidist import convergence_scan

    params = {}
    st = args.statement.lower()
    if st == "p91":
        params = {"a": args.a if args.a is not None else Fraction(0), "b": args.b if args.b is not None else Fraction(1, 2)}
    elif st == "p92":
        params = {"r": args.r if args.r is not None else 2}
    table = convergence_scan(st, args.p, _d_range(args), params, _workers(args))
    header = ["statement", "p", "d", "param", "value_num", "value_den"]
    rows = [[r.statement, r.p, r.d, r.param_string(), r.value.numerator, r.value.denominator] for r in table.rows]
    if args.format == "json":
        _emit(args, _json({"rows": [dict(zip(header, r)) for r in rows]}))
    else:
        _emit(args, _csv(header, rows))
    return EXIT_OK


def cmd_grouplab(args) -> int:
    from .group_lab import run_suite

    out = run_suite(args.suite, args.seed, args.instances)
    _emit(args, _json(out))
    return EXIT_OK if out["pass"] else EXIT_FAILED


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bsl", description="Orbit counts, oracles and L-function checks for Tate-Shafarevich growth.")
    ap.add_argument("--version", action="version", version=f"bsl {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, need_p=True):
        sp.add_argument("--p", type=_prime, required=need_p)
        sp.add_argument("--q", type=int)
        sp.add_argument("--d", type=int)
        sp.add_argument("--d-min", type=int)
        sp.add_argument("--d-max", type=int)
        sp.add_argument("--g", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--out")
        return sp

    sp = common(sub.add_parser("families", help="dim Sha / deg omega table over a d range"))
    sp.add_argument("--kind", required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_families)

    sp = common(sub.add_parser("orbits", help="orbits of a family carrier as JSON"))
    sp.add_argument("--kind", required=True)
    sp.set_defaults(func=cmd_orbits)

    sp = common(sub.add_parser("oracle", help="brute-force Hom counts against the orbit formula"))
    sp.add_argument("--preset", choices=("legendre", "random"), default="legendre")
    sp.add_argument("--n", type=int)
    sp.add_argument("--nu", type=int, default=1)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--instances", type=int, default=10)
    sp.add_argument("--max-size", type=int, default=5)
    sp.set_defaults(func=cmd_oracle)

    for name, func, helptext in (("lfunction", cmd_lfunction, "L-polynomial, Newton slopes and dim Sha"),
                                 ("crosscheck", cmd_crosscheck, "orbit dim Sha against the slope dim Sha")):
        sp = common(sub.add_parser(name, help=helptext))
        sp.add_argument("--kind", required=True)
        sp.set_defaults(func=func)

    sp = common(sub.add_parser("equidist", help="exact discrepancies over a d range"))
    sp.add_argument("--statement", choices=("p91", "p92", "p93"), required=True)
    sp.add_argument("--a", type=_rational)
    sp.add_argument("--b", type=_rational)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_equidist)

    sp = sub.add_parser("grouplab", help="group action, pointed map and tower suites")
    sp.add_argument("--suite", choices=("orbits", "pointed", "towers", "all"), default="all")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--instances", type=int, default=500)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_grouplab)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, MemoryError) as exc:
        print(f"bsl {args.cmd}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except AssertionError as exc:
        print(f"bsl {args.cmd}: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
