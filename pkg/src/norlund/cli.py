"""Command-line front end: coefficient tables, function values and the identity suite."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import identities
from .buhring import D_coeffs, D_variant_for, f_coeffs, h_closed, h_from_D, h_multisum
from .coeffs import METHODS, g_table
from .errors import NorlundError
from .gfunction import POLY_VARIANTS, g2ppp_eval, g2ppp_polyseries, gp0pp_eval
from .hyper import HyperSpec, eval_pfq
from .params import ParamSet
from .scalar import is_exact, parse_scalar

EXIT_OK, EXIT_INTERNAL, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 64
# failed identities share the nonzero code of internal errors
EXIT_FAILURES = EXIT_INTERNAL

H_METHODS = ("multisum", "closed", "from_D")
D_METHODS = ("v535", "v536")
G2_METHODS = ("series",) + POLY_VARIANTS
VERIFY_CSV_HEADER = ["identity_id", "seed", "trial", "verdict", "abs_residual", "rel_residual",
                     "tolerance", "skipped_reason"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# ------------------------------------------------------------------- formatting

def format_scalar(x) -> str:
    """Exact values as "p/q"; floats in shortest form; complex as "re+imi"."""
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    z = complex(x)

    def real(v: float) -> str:
        return str(int(v)) if v.is_integer() and abs(v) < 1e16 else repr(v)
    if z.imag == 0:
        return real(z.real)
    return f"{real(z.real)}{'+' if z.imag >= 0 else '-'}{real(abs(z.imag))}i"


def _pair(x) -> list:
    z = complex(x)
    return [z.real, z.imag]


def _emit_rows(out, output: str, rows: list, header: Sequence[str]):
    if output == "json":
        for r in rows:
            out.write(json.dumps(r, sort_keys=True) + "\n")
    elif output == "csv":
        w = csv.DictWriter(out, fieldnames=list(header), extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r)
    else:
        for r in rows:
            out.write("  ".join(f"{k}={r.get(k)}" for k in header if r.get(k) is not None) + "\n")


# ------------------------------------------------------------------- argument handling

def _tokens(csv_text: Optional[str], flag: str) -> list:
    if csv_text is None:
        raise UsageError(f"{flag} is required")
    try:
        return [parse_scalar(t) for t in csv_text.split(",")]
    except ValueError as e:
        raise UsageError(f"{flag}: {e}") from None


def _apply_mode(values: list, mode: str) -> tuple[list, str]:
    """Decimals or complex tokens force float mode; float mode drops exactness."""
    if mode == "exact" and all(is_exact(v) for v in values):
        return values, "exact"
    if mode == "exact":
        print("note: decimal or complex tokens force float mode", file=sys.stderr)
    return [complex(v) for v in values], "float"


def _params(args) -> tuple[ParamSet, str]:
    a = _tokens(args.a, "--a")
    b = _tokens(args.b, "--b")
    if len(a) != len(b):
        raise UsageError(f"--a has {len(a)} entries but --b has {len(b)}")
    vals, mode = _apply_mode(a + b, args.mode)
    return ParamSet(tuple(vals[:len(a)]), tuple(vals[len(a):])), mode


def _index(args, name: str, p: int) -> int:
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name} is required")
    if not 1 <= v <= p:
        raise UsageError(f"--{name} must lie in 1..{p}")
    return v


def _real_z(token: Optional[str], allow_one: bool = False):
    if token is None:
        raise UsageError("--z is required")
    try:
        z = parse_scalar(token)
    except ValueError as e:
        raise UsageError(f"--z: {e}") from None
    zc = complex(z)
    if zc.imag != 0:
        raise UsageError("--z must be real")
    if zc.real <= 0 or (zc.real == 1 and not allow_one):
        raise UsageError("--z must lie in (0,1) or (1,inf)")
    return z


def _p_values(text: Optional[str]) -> Optional[list]:
    if text is None:
        return None
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            vals = list(range(int(lo), int(hi) + 1))
        else:
            vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"--p: expected an integer, a list or a range lo..hi, got {text!r}") from None
    if not vals or min(vals) < 1:
        raise UsageError("--p values must be positive")
    return vals


def _tol_profile(path: Optional[str]) -> Optional[dict]:
    if path is None:
        return None
    try:
        with open(path) as fh:
            prof = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"--tol-profile: {e}") from None
    known = set(identities.DEFAULT_PROFILE) | set(identities.SUITES)
    if not isinstance(prof, dict) or not set(prof) <= known:
        raise UsageError(f"--tol-profile keys must be among {sorted(known)}")
    return prof


# ------------------------------------------------------------------- subcommands

def cmd_coeffs(args, out) -> int:
    P, mode = _params(args)
    if args.n is None or args.n < 0:
        raise UsageError("--n must be a nonnegative integer")
    kind, N = args.kind, args.n
    if kind == "g":
        method = args.method or "young"
        if method not in METHODS:
            raise UsageError(f"--method for g must be one of {METHODS}")
        table = g_table(P, _index(args, "k", P.p), N, method)
    elif kind == "f":
        table = f_coeffs(P, _index(args, "s", P.p), N)
    elif kind == "h":
        method = args.method or "multisum"
        if method not in H_METHODS:
            raise UsageError(f"--method for h must be one of {H_METHODS}")
        s = _index(args, "s", P.p)
        if method == "multisum":
            table = h_multisum(P, s, N, args.tol)
        elif method == "closed":
            if P.p not in (3, 4):
                raise UsageError("closed h forms exist for p in {3, 4}")
            table = h_closed(P, s, N, args.tol)
        else:
            table = h_from_D(P, s, N, args.tol)
    else:
        k, s = _index(args, "k", P.p), _index(args, "s", P.p)
        if k == s:
            raise UsageError("--k and --s must differ for D")
        method = args.method or D_variant_for(P, s)
        if method not in D_METHODS:
            raise UsageError(f"--method for D must be one of {D_METHODS}")
        table = D_coeffs(P, k, s, N, method, args.tol)
    values = [format_scalar(v) for v in table.values]
    if args.output == "json":
        obj = {**table.to_json(), "values": values}
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        rows = [{"n": n, "value": v} for n, v in enumerate(values)]
        _emit_rows(out, args.output, rows, ["n", "value"])
    return EXIT_OK


def cmd_eval(args, out) -> int:
    fn = args.fn
    meta: dict = {"fn": fn}
    if fn == "pfq":
        upper = _tokens(args.a, "--a")
        lower = _tokens(args.b, "--b") if args.b else []
        z = _real_z(args.z, allow_one=True)
        vals, mode = _apply_mode(upper + lower + [z], args.mode)
        spec = HyperSpec(tuple(vals[:len(upper)]), tuple(vals[len(upper):-1]))
        value = eval_pfq(spec, vals[-1])
        if spec.terminating_index is not None:
            meta.update(regime="terminating", terms=spec.terminating_index + 1)
        else:
            meta.update(regime="z=1 extrapolated" if complex(vals[-1]) == 1 else "series", terms=None)
    else:
        P, mode = _params(args)
        z = _real_z(args.z)
        zc = complex(z)
        if fn == "gp0pp":
            value = gp0pp_eval(P, zc)
            if abs(zc) > 1:
                regime = "outside unit disk"
            else:
                regime = "near zero" if abs(zc) <= 0.5 else "near one"
            meta.update(regime=regime)
        else:
            k, s = _index(args, "k", P.p), _index(args, "s", P.p)
            method = args.method or "series"
            if method not in G2_METHODS:
                raise UsageError(f"--method for g2ppp must be one of {G2_METHODS}")
            if method == "series":
                value = g2ppp_eval(P, k, s, zc, args.tol)
                meta.update(regime="power series in 1-z")
            else:
                value = g2ppp_polyseries(P, k, s, zc, method, max(args.tol, 1e-12))
                meta.update(regime=f"polynomial series {method}")
    meta.update(mode=mode)
    row = {**meta, "value": _pair(value), "text": format_scalar(value)}
    if args.output == "json":
        out.write(json.dumps(row, sort_keys=True) + "\n")
    else:
        z = complex(value)
        _emit_rows(out, args.output, [{"fn": fn, "re": z.real, "im": z.imag, "regime": meta.get("regime")}],
                   ["fn", "re", "im", "regime"])
    return EXIT_OK


def cmd_verify(args, out) -> int:
    names = None
    if args.suite != "all":
        names = [n.strip() for n in args.suite.split(",") if n.strip()]
        unknown = [n for n in names if n not in identities.SUITES]
        if unknown or not names:
            raise UsageError(f"unknown identity ids {unknown}; known: {', '.join(identities.SUITES)}")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    p_values = _p_values(args.p)
    profile = _tol_profile(args.tol_profile)
    fails = skips = 0
    header = VERIFY_CSV_HEADER
    writer = None
    if args.output == "csv":
        writer = csv.DictWriter(out, fieldnames=header, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()

    def emit(rep):
        nonlocal fails, skips
        fails += rep.verdict == "fail"
        skips += rep.verdict == "skipped"
        if args.output == "json":
            out.write(rep.dumps() + "\n")
        elif writer is not None:
            writer.writerow(rep.to_json())
        else:
            line = f"{rep.identity_id} trial={rep.trial} {rep.verdict} rel={rep.rel_residual:.3e}"
            out.write(line + (f" ({rep.skipped_reason})" if rep.skipped_reason else "") + "\n")
        out.flush()

    results = identities.run_suite(args.seed, args.trials, profile, names, p_values, on_report=emit)
    for summary in results:
        if isinstance(summary, dict):
            if args.output == "json":
                out.write(json.dumps(summary, sort_keys=True) + "\n")
            elif args.output == "human":
                out.write(f"{summary['identity_id']}: pass={summary['pass']} fail={summary['fail']} "
                          f"skipped={summary['skipped']}\n")
            else:
                print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    if fails:
        return EXIT_FAILURES
    if args.strict and skips:
        return EXIT_PRECONDITION
    return EXIT_OK


# ------------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="float")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--max-terms", type=int, default=10000)
    common.add_argument("--output", choices=("json", "csv", "human"), default="json")

    parser = _Parser(prog="norlund", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("coeffs", parents=[common], help="coefficient tables g, f, h, D")
    c.add_argument("--kind", choices=("g", "f", "h", "D"), required=True)
    c.add_argument("--a")
    c.add_argument("--b")
    c.add_argument("--k", type=int)
    c.add_argument("--s", type=int)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--method")

    e = sub.add_parser("eval", parents=[common], help="G-function and pFq values")
    e.add_argument("--fn", choices=("gp0pp", "g2ppp", "pfq"), required=True)
    e.add_argument("--a", help="a parameters (upper parameters for pfq)")
    e.add_argument("--b", help="b parameters (lower parameters for pfq)")
    e.add_argument("--z")
    e.add_argument("--k", type=int)
    e.add_argument("--s", type=int)
    e.add_argument("--method")

    v = sub.add_parser("verify", parents=[common], help="seeded identity suite")
    v.add_argument("--suite", default="all")
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--p")
    v.add_argument("--tol-profile")
    v.add_argument("--strict", action="store_true", help="count skipped trials as failures")
    return parser


COMMANDS = {"coeffs": cmd_coeffs, "eval": cmd_eval, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.tol <= 0 or args.max_terms < 1:
            raise UsageError("--tol and --max-terms must be positive")
        if "NORLUND_MAX_TERMS" not in os.environ or args.max_terms != 10000:
            os.environ["NORLUND_MAX_TERMS"] = str(args.max_terms)
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except NorlundError as e:
        print(json.dumps({"error": e.reason, "message": str(e), "info": _jsonable(e.info)},
                         sort_keys=True), file=sys.stderr)
        return EXIT_PRECONDITION
    except SystemExit as e:
        # --help exits through argparse
        return int(e.code or 0)
    except Exception as e:  # noqa: BLE001 - report anything else as an internal error
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def _jsonable(info: dict) -> dict:
    return json.loads(json.dumps(info, default=str))


def run() -> None:
    sys.exit(main())
