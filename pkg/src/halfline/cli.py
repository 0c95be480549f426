"""Command-line front end.

    halfline verify --suite all --alpha 0.5
    halfline diagnose --setting bessel --family gaussian --sigma 0.8:1.2:5
    halfline diagnose --setting laguerre-fn --family shifted-bump --n 1:20
    halfline transform --hankel --alpha 0.5 --family gaussian --ymax 8 --out h.csv
    halfline translate --laguerre --alpha 1 --n 1 --t 1
    halfline gamma-table --alpha 1 --K 16 --out gamma.csv

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Ranges: `a:b:n` is n equispaced points from a to b, `a:b` the integers a..b.
Families prefixed with `@` are read from an `x,value` CSV file.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings

import numpy as np

from . import bessel, compactness, laguerre, sequences
from .spaces import (BESSEL_FN, LAGUERRE_FN, LAGUERRE_SEQ, SeqVec, bump, exp_decay, gaussian, laguerre_R,
                     read_sampled_csv, write_sampled_csv)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
SETTING_NAMES = {"laguerre-fn": LAGUERRE_FN, "laguerre-seq": LAGUERRE_SEQ, "bessel": BESSEL_FN}
FUNCTION_FAMILIES = ("gaussian", "shifted-bump", "laguerre-R", "exp-decay")
SEQUENCE_FAMILIES = ("unit", "geometric")


class UsageError(Exception):
    pass


def parse_range(text, integer=False):
    """`x`, `a:b` (integers a..b inclusive) or `a:b:n` (n points) -> list of numbers."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            values = [float(parts[0])]
        elif len(parts) == 2:
            a, b = (float(p) for p in parts)
            if a != int(a) or b != int(b) or b < a:
                raise UsageError(f"range {text!r}: `a:b` needs integers a <= b")
            values = [float(v) for v in range(int(a), int(b) + 1)]
        elif len(parts) == 3:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise UsageError(f"range {text!r}: point count must be >= 1")
            values = np.linspace(a, b, n).tolist()
        else:
            raise UsageError(f"range {text!r}: expected x, a:b or a:b:n")
    except ValueError:
        raise UsageError(f"range {text!r}: not numeric") from None
    if integer:
        if any(v != int(v) for v in values):
            raise UsageError(f"range {text!r}: integers expected")
        return [int(v) for v in values]
    return values


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"{text!r}: expected comma-separated numbers") from None


def build_members(args, setting):
    name = args.family
    if name.startswith("@"):
        if setting == LAGUERRE_SEQ:
            raise UsageError("CSV families are functions; use a function setting")
        try:
            return [read_sampled_csv(name[1:])]
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read family {name[1:]!r}: {exc}") from None
    if setting == LAGUERRE_SEQ:
        if name == "unit":
            idx = parse_range(args.n or "0", integer=True)
            length = max(args.length, max(idx) + 1)
            return [SeqVec.unit(k, args.alpha, length) for k in idx]
        if name == "geometric":
            return [SeqVec(np.exp(-r * np.arange(args.length)), args.alpha) for r in parse_range(args.rate or "1")]
        raise UsageError(f"unknown sequence family {name!r}; choose from {', '.join(SEQUENCE_FAMILIES)}")
    if name == "gaussian":
        return [gaussian(s) for s in parse_range(args.sigma or "1")]
    if name == "shifted-bump":
        return [bump(c, args.radius) for c in parse_range(args.n or "1:20")]
    if name == "laguerre-R":
        return [laguerre_R(k, args.alpha) for k in parse_range(args.n or "0", integer=True)]
    if name == "exp-decay":
        return [exp_decay(r) for r in parse_range(args.rate or "1")]
    raise UsageError(f"unknown family {name!r}; choose from {', '.join(FUNCTION_FAMILIES)} or @file.csv")


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _write_rows(out, header, rows):
    fh = sys.stdout if out in (None, "-") else open(out, "w", newline="")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, float) else v for v in r])
    finally:
        if fh is not sys.stdout:
            fh.close()


# --- commands ------------------------------------------------------------------

def cmd_verify(args):
    report = run_suite(args.suite, alpha=args.alpha, K=args.K)
    _emit(json.dumps(report, sort_keys=True, indent=2), args.out)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_diagnose(args):
    setting = SETTING_NAMES[args.setting]
    if setting == LAGUERRE_SEQ and args.family in FUNCTION_FAMILIES:
        raise UsageError(f"family {args.family!r} is a function family; laguerre-seq takes "
                         f"{', '.join(SEQUENCE_FAMILIES)}")
    members = build_members(args, setting)
    if setting == LAGUERRE_SEQ:
        family = compactness.FamilySpec(tuple(members), setting, args.alpha, args.p)
    elif args.family == "shifted-bump":
        family = compactness.shifted_bump_family(parse_range(args.n or "1:20"), setting, args.alpha, args.p,
                                                 radius=args.radius)
    else:
        family = compactness.FamilySpec(tuple(members), setting, args.alpha, args.p)
    overrides = {"epsilon": args.epsilon, "M0": args.M0, "R_max": args.R_max, "t_points": args.t_points,
                 "h_points": args.h_points, "N_max": args.N_max, "seed": args.seed}
    if args.delta_grid:
        overrides["delta_grid"] = _float_list(args.delta_grid)
    if args.no_refinement:
        overrides["refinement_check"] = False
    cfg = compactness.DiagnosticsConfig(**{k: v for k, v in overrides.items() if v is not None})
    table = None
    if setting == LAGUERRE_SEQ:
        K = max(len(a) for a in members) - 1
        table = sequences.cached_table(K, args.alpha, args.cache_dir)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # recorded in the report
        report = compactness.verdict(family, cfg, table=table)
    _emit(report.to_json(include_metadata=not args.no_metadata), args.out)
    if args.csv_prefix:
        report.write_csv(args.csv_prefix)
    return EXIT_OK


def cmd_transform(args):
    members = build_members(args, LAGUERRE_FN)
    if len(members) != 1:
        raise UsageError("transform takes a single function")
    f = members[0]
    if args.analyze:
        coeffs = laguerre.analyze(f, args.alpha, args.N)
        _write_rows(args.out, ("n", "value"), ((n, float(v)) for n, v in enumerate(coeffs.values)))
        return EXIT_OK
    params = bessel.HankelParams(args.alpha, x_max=args.xmax)
    y = np.linspace(0.0, args.ymax, args.points)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        values = bessel.hankel(f, params, y)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    if args.out in (None, "-"):
        _write_rows(None, ("y", "value"), zip(y.tolist(), values.tolist()))
    else:
        write_sampled_csv(args.out, y, values, header=("y", "value"))
    return EXIT_OK


def cmd_translate(args):
    members = build_members(args, LAGUERRE_FN)
    if len(members) != 1:
        raise UsageError("translate takes a single function")
    f = members[0]
    if args.t < 0:
        raise UsageError("--t must be >= 0")
    x = np.linspace(0.0, args.xmax, args.points)
    if args.bessel:
        g = bessel.translate_bessel(f, args.t, args.alpha)
    else:
        g = laguerre.translate_laguerre(f, args.t, laguerre.LaguerreTranslationParams.create(args.alpha))
    _write_rows(args.out, ("x", "value"), zip(x.tolist(), g(x).tolist()))
    return EXIT_OK


def cmd_gamma_table(args):
    if args.K < 0:
        raise UsageError("--K must be >= 0")
    if args.cache_dir:
        table = sequences.cached_table(args.K, args.alpha, args.cache_dir)
        path = sequences.cache_path(args.cache_dir, args.alpha, args.K)
        if args.out:
            sequences.write_table_csv(table, args.out)
        else:
            sys.stdout.write(f"{path}\n")
        return EXIT_OK
    table = sequences.build_linearization_table(args.K, args.alpha)
    out = args.out or f"gamma_alpha={args.alpha!r}_K={args.K}.csv"
    sequences.write_table_csv(table, out)
    sys.stdout.write(json.dumps(table.describe(), sort_keys=True) + "\n")
    return EXIT_OK


# --- parser ----------------------------------------------------------------------

def _family_args(p, default_family="gaussian"):
    p.add_argument("--family", default=default_family,
                   help="gaussian | shifted-bump | laguerre-R | exp-decay | unit | geometric | @file.csv "
                        "(default %(default)s)")
    p.add_argument("--sigma", help="gaussian widths (range)")
    p.add_argument("--n", help="bump centers / Laguerre or unit indices (range)")
    p.add_argument("--rate", help="exp-decay or geometric rates (range)")
    p.add_argument("--radius", type=float, default=1.0, help="bump radius (default %(default)s)")
    p.add_argument("--length", type=int, default=16, help="sequence length (default %(default)s)")


def build_parser():
    parser = argparse.ArgumentParser(prog="halfline", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run an identity-verification suite")
    p.add_argument("--suite", default="all", help=f"{' | '.join(SUITES)} | all (default %(default)s)")
    p.add_argument("--alpha", type=float, default=0.5, help="default %(default)s")
    p.add_argument("--K", type=int, default=24, help="linearization table size (default %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="seed (suites are deterministic; recorded only)")
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("diagnose", help="precompactness diagnostics report for a family")
    p.add_argument("--setting", choices=sorted(SETTING_NAMES), default="laguerre-fn")
    p.add_argument("--alpha", type=float, default=0.5, help="default %(default)s")
    p.add_argument("--p", type=float, default=2.0, help="exponent (default %(default)s)")
    _family_args(p)
    p.add_argument("--epsilon", type=float, help="default 1e-2")
    p.add_argument("--M0", type=float, help="translation horizon (default 4)")
    p.add_argument("--R-max", dest="R_max", type=float, help="tail search cap (default 64)")
    p.add_argument("--delta-grid", help="comma-separated decreasing deltas (default 0.5,0.25,0.1,0.05,0.02)")
    p.add_argument("--t-points", dest="t_points", type=int, help="default 33")
    p.add_argument("--h-points", dest="h_points", type=int, help="points per delta (default 9)")
    p.add_argument("--N-max", dest="N_max", type=int, help="sequence index cap")
    p.add_argument("--no-refinement", action="store_true", help="skip the grid-refinement check")
    p.add_argument("--seed", type=int, default=0, help="recorded in the report (default %(default)s)")
    p.add_argument("--cache-dir", help="linearization table cache directory")
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.add_argument("--csv-prefix", help="also write <prefix>_omega.csv and <prefix>_tail.csv")
    p.add_argument("--no-metadata", action="store_true", help="omit the timestamp block")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("transform", help="Hankel transform samples or Laguerre coefficients")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--hankel", action="store_true", help="Hankel transform (default)")
    mode.add_argument("--analyze", action="store_true", help="Laguerre coefficients n = 0..N")
    p.add_argument("--alpha", type=float, default=0.5, help="default %(default)s")
    _family_args(p)
    p.add_argument("--ymax", type=float, default=8.0, help="default %(default)s")
    p.add_argument("--xmax", type=float, default=12.0, help="integration cutoff (default %(default)s)")
    p.add_argument("--points", type=int, default=161, help="default %(default)s")
    p.add_argument("--N", type=int, default=16, help="highest coefficient index (default %(default)s)")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("translate", help="samples of a translated function")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--laguerre", action="store_true", help="Laguerre translation (default)")
    mode.add_argument("--bessel", action="store_true", help="Bessel translation")
    p.add_argument("--alpha", type=float, default=0.5, help="default %(default)s")
    _family_args(p, default_family="laguerre-R")
    p.add_argument("--t", type=float, required=True, help="translation parameter")
    p.add_argument("--xmax", type=float, default=8.0, help="default %(default)s")
    p.add_argument("--points", type=int, default=81, help="default %(default)s")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("gamma-table", help="build (or load from cache) the linearization table")
    p.add_argument("--alpha", type=float, default=0.5, help="default %(default)s")
    p.add_argument("--K", type=int, default=16, help="default %(default)s")
    p.add_argument("--out", help="CSV path (default gamma_alpha=<a>_K=<K>.csv)")
    p.add_argument("--cache-dir", help="reuse/write the table in this directory")
    p.set_defaults(func=cmd_gamma_table)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.suite not in SUITES + ("all",):
        parser.error(f"unknown suite {args.suite!r}")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"halfline {args.command}: {exc}\n")
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"halfline {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
