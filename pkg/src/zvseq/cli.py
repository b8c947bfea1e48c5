"""Command-line interface.

Exit codes: 0 success, 1 bad parameters, 2 invariant violation, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance, bounds, oracle, stats, theory
from .errors import ParameterError, ZvSeqError
from .experiments import load_config, run_experiment
from .seqgen import (
    ElGamalParams,
    elgamal_sequence,
    least_period,
    random_balanced_sequence,
    read_sequence,
    write_sequence,
)

P_LIMIT = 2**50


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _check_p(p: int) -> int:
    if p >= P_LIMIT:
        raise ParameterError(f"p={p} exceeds the supported limit 2^50")
    return p


def _fraction(x: Fraction) -> str:
    return str(x)


def cmd_generate(args) -> int:
    if args.random:
        if args.n is None:
            raise ParameterError("--random needs --n")
        seq = random_balanced_sequence(args.v, args.n, args.seed)
    else:
        if args.p is None or args.g is None:
            raise ParameterError("give --p and --g, or --random")
        seq = elgamal_sequence(ElGamalParams(_check_p(args.p), args.g, args.v))
    if args.out:
        with open(args.out, "w") as fh:
            write_sequence(seq, fh)
    else:
        write_sequence(seq, sys.stdout)
    return 0


def cmd_stats(args) -> int:
    with open(args.sequence) as fh:
        seq = read_sequence(fh)
    tuples = [stats.tuple_counts(seq, t) for t in args.t]
    runs = stats.run_counts(seq)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            stats.write_stats_csv(fh, tuples, runs)
    bal = stats.balance_profile(seq)
    summary = {
        "v": seq.v,
        "n": len(seq),
        "least_period": least_period(seq),
        "symbol_counts": bal.counts,
        "balance_difference": bal.max_difference,
        "tuple_deviation": {str(ts.t): stats.tuple_balance_deviation(ts) for ts in tuples},
        "runs_by_length": {str(t): c for t, c in sorted(runs.totals.items())},
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_bounds(args) -> int:
    _check_p(args.p)
    rows = [row for t in args.t for row in bounds.bound_report_rows(args.p, args.g, args.v, t)]
    bounds.write_bound_report(sys.stdout, rows)
    return 0


def cmd_moments(args) -> int:
    out: dict = {"v": args.v, "n": args.n}
    if args.z is not None:
        m = theory.tuple_moments_exact(args.v, args.n, args.z)
        out.update(kind="tuple", key="".join(map(str, args.z)))
        if args.approx:
            a = theory.tuple_moment_approximations(args.v, args.n, len(args.z))
            out["approximations"] = vars(a)
    elif args.run is not None:
        m = theory.run_moments_exact(args.v, args.n, args.run)
        out.update(kind="run", key=str(args.run))
        if args.approx:
            out["approximations"] = vars(theory.run_moment_approximations(args.v, args.n, args.run))
    else:
        raise ParameterError("give --z or --run")
    out.update(mean=_fraction(m.mean), variance=_fraction(m.variance),
               mean_float=float(m.mean), variance_float=float(m.variance))
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def cmd_oracle(args) -> int:
    if args.census:
        census = oracle.exact_period_census(args.v, args.n, cap=args.cap)
        print(json.dumps({"v": args.v, "n": args.n, "census": census}, sort_keys=True))
        return 0
    if args.z is not None:
        dist = oracle.exact_tuple_distribution(args.v, args.n, args.z, cap=args.cap)
        kind, key = "tuple", "".join(map(str, args.z))
    elif args.run is not None:
        if len(args.run) != 2:
            raise ParameterError("--run takes b,t")
        b, t = args.run
        dist = oracle.exact_run_distribution(args.v, args.n, b, t, cap=args.cap)
        kind, key = "run", f"{b}:{t}"
    else:
        raise ParameterError("give --z, --run or --census")
    print(dist.to_json(args.v, args.n, kind, key))
    return 0


def cmd_experiment(args) -> int:
    config = load_config(args.config)
    out_dir = Path(args.out) if args.out else None
    report, paths = run_experiment(config, out_dir)
    print(f"{len(report.records)} trial records")
    for path in paths:
        print(path)
    return 0


def cmd_verify(args) -> int:
    results = []
    for number in args.only or range(1, len(acceptance.CRITERIA) + 1):
        res = acceptance.run_criterion(number)
        print(res.line(), flush=True)
        results.append(res)
    failed = sum(not r.passed for r in results)
    print(f"{len(results)} criteria run, {failed} failed")
    return 2 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zvseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="emit an ElGamal or random balanced sequence")
    p.add_argument("--p", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--random", action="store_true", help="uniform member of B(v, n)")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("stats", help="tuple, run and balance statistics of a sequence file")
    p.add_argument("sequence")
    p.add_argument("--t", type=_int_list, default=[1, 2])
    p.add_argument("--csv", help="also write the (kind, key, count) table here")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bounds", help="bound intervals for (p, g, v, t)")
    for name in ("p", "g", "v"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.add_argument("--t", type=_int_list, default=[2])
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("moments", help="exact and approximate moments over B(v, n)")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", type=_int_list)
    p.add_argument("--run", type=int, help="run length t")
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("oracle", help="exhaustive distributions over B(v, n)")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", type=_int_list)
    p.add_argument("--run", type=_int_list, help="b,t")
    p.add_argument("--census", action="store_true")
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="run the trial grid described by a config file")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (overrides config and environment)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--only", type=_int_list, help="criterion numbers to run")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ZvSeqError as exc:
        print(f"zvseq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"zvseq: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
