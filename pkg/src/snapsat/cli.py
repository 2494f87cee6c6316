"""Command-line interface.

Exit codes: 0 ok, 1 usage, 2 input error, 3 unsatisfiable / no solutions,
4 verification failure. All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .baseline import BaselineConfig, run_baseline
from .bench import ENGINES, bench, write_report
from .cnf import DimacsParseError, CnfFormula, evaluate, falsified_clauses, parse_dimacs_file
from .deltas import identical_delta_count
from .engine import RunConfig, Suite, run
from .metrics import entropy_histogram, suite_ncd
from .planted import gen_planted
from .solver import ExternalSolverError, UnsatFormulaError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_UNSAT = 3
EXIT_VERIFY = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_formula(path: str) -> CnfFormula:
    try:
        return parse_dimacs_file(path)
    except FileNotFoundError:
        raise _InputError(f"no such file: {path}")
    except DimacsParseError as e:
        raise _InputError(f"{path}: {e}")


def _load_suite(path: str) -> tuple[Suite, dict]:
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise _InputError(f"no such file: {path}")
    try:
        return Suite.from_text(text)
    except ValueError as e:
        raise _InputError(f"{path}: {e}")


class _InputError(Exception):
    pass


def _write_or_stdout(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _add_run_options(p: _Parser):
    p.add_argument("cnf", help="DIMACS CNF file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-init", type=int, default=100, help="initial sample count")
    p.add_argument("--time-budget", type=float, default=600.0, help="seconds")
    p.add_argument(
        "--solver",
        default="internal",
        help="internal | external:<cmd> (cmd gets the DIMACS path appended, or use {path})",
    )
    p.add_argument("--out", help="suite output file (default: stdout)")
    p.add_argument("--stats", help="write run stats JSON here")


def _cmd_sample(args) -> int:
    f = _load_formula(args.cnf)
    cfg = RunConfig(
        n_init=args.n_init,
        k=args.k,
        improve_threshold=args.improve_threshold,
        time_budget_s=args.time_budget,
        mutations_per_centroid=args.mutations_per_centroid,
        seed=args.seed,
        solver=args.solver,
        ncd_subsample_cap=args.ncd_cap,
    )
    suite, stats = run(f, cfg)
    _write_or_stdout(suite.to_text(args.seed), args.out)
    if args.stats:
        Path(args.stats).write_text(stats.to_json())
    print(
        f"suite: {len(suite)} tests in {stats.wall_time_s:.1f}s "
        f"({stats.outer_iterations} iterations, stop: {stats.stop_reason})",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_baseline(args) -> int:
    f = _load_formula(args.cnf)
    cfg = BaselineConfig(
        n_init=args.n_init,
        seed=args.seed,
        time_budget_s=args.time_budget,
        max_proposals=args.max_proposals,
        solver=args.solver,
        ncd_subsample_cap=args.ncd_cap,
    )
    suite, stats = run_baseline(f, cfg)
    _write_or_stdout(suite.to_text(args.seed), args.out)
    if args.stats:
        Path(args.stats).write_text(stats.to_json())
    print(
        f"suite: {len(suite)} unique valid tests from "
        f"{stats.candidates_proposed} proposals in {stats.wall_time_s:.1f}s",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    f = _load_formula(args.cnf)
    suite, meta = _load_suite(args.suite)
    if meta.get("vars") not in (None, f.num_vars):
        raise _InputError(
            f"suite is over {meta['vars']} variables, formula has {f.num_vars}"
        )
    bad = 0
    for i, a in enumerate(suite.tests, start=1):
        if a.n != f.num_vars:
            raise _InputError(f"row {i}: length {a.n} != formula vars {f.num_vars}")
        if not evaluate(f, a):
            nfal = len(falsified_clauses(f, a))
            print(f"row {i}: INVALID ({nfal} falsified clauses)")
            bad += 1
    if bad:
        print(f"{bad}/{len(suite)} rows invalid")
        return EXIT_VERIFY
    print(f"all {len(suite)} rows valid")
    return EXIT_OK


def _cmd_stats(args) -> int:
    f = _load_formula(args.cnf)
    suite, _ = _load_suite(args.suite)
    if not len(suite):
        raise _InputError("empty suite")
    invalid = suite.validate(f)
    validity = (len(suite) - len(invalid)) / len(suite)
    lines = [f"tests={len(suite)}", f"validity_rate={validity:.6f}"]
    if len(suite) >= 2:
        value, subsampled = suite_ncd(suite.tests, cap=args.ncd_cap, seed=args.seed)
        lines.append(f"ncd={value:.6f}")
        lines.append(f"ncd_subsampled={str(subsampled).lower()}")
    print("\n".join(lines))

    hist = entropy_histogram(suite.tests, bins=args.bins)
    rows = ["bucket_low,bucket_high,percent"]
    rows.extend(f"{lo:.6f},{hi:.6f},{pct:.6f}" for lo, hi, pct in hist)
    _write_or_stdout("\n".join(rows) + "\n", args.hist_out)

    if args.delta_hist:
        counts = identical_delta_count(suite.tests)
        mult: dict[int, int] = {}
        for c in counts.values():
            mult[c] = mult.get(c, 0) + 1
        with open(args.delta_hist, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["multiplicity", "num_delta_patterns"])
            for m in sorted(mult):
                writer.writerow([m, mult[m]])
    if args.plot:
        from .plots import plot_entropy_histogram

        plot_entropy_histogram(hist, Path(args.plot))
    return EXIT_OK


def _cmd_gen_synth(args) -> int:
    try:
        f = gen_planted(args.vars, args.ratio, args.width, seed=args.seed)
    except ValueError as e:
        raise _InputError(str(e))
    header = (
        f"c planted {args.width}-SAT vars={args.vars} ratio={args.ratio} "
        f"seed={args.seed}\n"
    )
    _write_or_stdout(header + f.to_dimacs(), args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    instances: list[str] = []
    for item in args.instances:
        p = Path(item)
        if p.is_dir():
            instances.extend(sorted(str(q) for q in p.glob("*.cnf")))
        elif p.exists():
            instances.append(str(p))
        else:
            raise _InputError(f"no such instance: {item}")
    if not instances:
        raise _InputError("no instances found")
    if args.seeds:
        try:
            seeds = [int(s) for s in args.seeds.split(",")]
        except ValueError:
            raise _InputError(f"bad seed list: {args.seeds!r}")
    else:
        seeds = list(range(1, args.repeats + 1))
    engines = args.engines.split(",")
    for e in engines:
        if e not in ENGINES:
            raise _InputError(f"unknown engine {e!r} (have: {', '.join(ENGINES)})")

    report = bench(
        instances,
        seeds,
        engines=engines,
        time_budget_s=args.time_budget,
        n_init=args.n_init,
        out_dir=args.report,
        jobs=args.jobs,
        solver=args.solver,
    )
    paths = write_report(report, args.report, figures=not args.no_figures)
    for p in paths:
        print(f"wrote {p}")
    agg = report.aggregate
    if "size_ratio_median" in agg:
        print(
            f"median size ratio (baseline/snap): {agg['size_ratio_median']:.2f}  "
            f"median time ratio: {agg['time_ratio_median']:.2f}  "
            f"median ncd ratio (snap/baseline): {agg['ncd_ratio_median']:.3f}"
        )
    if agg.get("failures"):
        print(f"{agg['failures']} run(s) failed; see report.csv error column")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="snapsat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="generate a test suite by centroid mutation")
    _add_run_options(p)
    p.add_argument("--k", type=int, default=5, help="cluster count")
    p.add_argument(
        "--improve-threshold",
        type=float,
        default=0.05,
        help="minimum relative NCD improvement to keep iterating",
    )
    p.add_argument(
        "--mutations-per-centroid",
        type=int,
        default=None,
        help="candidates per centroid per iteration (default: n-init)",
    )
    p.add_argument("--ncd-cap", type=int, default=500)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("baseline", help="generate a suite by XOR-combination")
    _add_run_options(p)
    p.add_argument(
        "--max-proposals",
        type=int,
        default=None,
        help="stop after this many proposals (deterministic alternative to the clock)",
    )
    p.add_argument("--ncd-cap", type=int, default=500)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("verify", help="check every suite row against the formula")
    p.add_argument("cnf")
    p.add_argument("suite")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stats", help="suite diversity and validity statistics")
    p.add_argument("cnf")
    p.add_argument("suite")
    p.add_argument("--bins", type=int, default=10, help="entropy histogram buckets")
    p.add_argument("--ncd-cap", type=int, default=500)
    p.add_argument("--seed", type=int, default=0, help="seed for NCD subsampling")
    p.add_argument("--hist-out", help="entropy histogram CSV (default: stdout)")
    p.add_argument("--delta-hist", help="write delta-multiplicity histogram CSV here")
    p.add_argument("--plot", help="render entropy histogram PNG here")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("gen-synth", help="generate a planted k-SAT instance")
    p.add_argument("--vars", type=int, default=200)
    p.add_argument("--ratio", type=float, default=3.0)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output DIMACS file (default: stdout)")
    p.set_defaults(func=_cmd_gen_synth)

    p = sub.add_parser("bench", help="run engines over a corpus and report")
    p.add_argument(
        "--instances", nargs="+", required=True, help="DIMACS files or directories"
    )
    p.add_argument("--engines", default="snap,baseline")
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--repeats", type=int, default=3, help="used when --seeds is absent")
    p.add_argument("--report", required=True, help="report output directory")
    p.add_argument("--time-budget", type=float, default=60.0)
    p.add_argument("--n-init", type=int, default=100)
    p.add_argument("--solver", default="internal")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except UnsatFormulaError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSAT
    except ExternalSolverError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
