"""``cover`` command line: sample, descend, experiment, check."""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

from . import checks
from .harness import (
    METHODS,
    WEIGHTED_D2,
    initial_configuration,
    load_scenario,
    prepare,
    preset,
    run_scenario,
    run_trial,
)
from .lloyd import DescentTrace
from .plots import emit_plots, emit_trace_svg
from .sampling import RngStream


def _scenario_from_args(args):
    if args.scenario:
        sc = load_scenario(args.scenario)
    else:
        sc = preset(args.preset or "paper")
    over = {}
    if args.k is not None:
        over["k"] = args.k
    if args.epsilon is not None:
        over["epsilon"] = args.epsilon
    if args.runs is not None:
        over["runs"] = args.runs
    if args.seed is not None:
        over["master_seed"] = args.seed
    if getattr(args, "method", None):
        over["methods"] = (args.method,)
    return replace(sc, **over) if over else sc


def _add_common(p, with_method=True):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--scenario", help="scenario JSON file")
    src.add_argument("--preset", help="built-in scenario: paper, paper-1, paper-2, paper-3")
    p.add_argument("--k", type=int, help="number of sensors")
    p.add_argument("--epsilon", type=float, help="grid cell size")
    if with_method:
        p.add_argument("--method", choices=METHODS, help="initial placement method")
    p.add_argument("--runs", type=int, help="runs per method")
    p.add_argument("--seed", type=int, help="master seed (64-bit unsigned)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--plots", action="store_true", help="also write SVG figures")


def cmd_sample(args):
    sc = _scenario_from_args(args)
    method = args.method or WEIGHTED_D2
    prepared = prepare(sc)
    P = initial_configuration(sc, method, RngStream(sc.master_seed, args.run_id).generator(), prepared)
    for x, y in P:
        print(f"{x:.6f} {y:.6f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "initial_positions.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sensor", "x", "y"])
            for i, (x, y) in enumerate(P):
                w.writerow([i, repr(float(x)), repr(float(y))])
        if args.plots:
            trace = DescentTrace(iterates=[P], coverage_history=[])
            emit_trace_svg(trace, prepared.field, sc.domain, out / "initial_configuration.svg", title=method)
    return 0


def cmd_descend(args):
    sc = _scenario_from_args(args)
    method = args.method or sc.methods[0]
    prepared = prepare(sc)
    rec = run_trial(sc, args.run_id, method, prepared)
    print(
        f"method={rec.method} seed={rec.seed} initial_H={rec.initial_H:.6f} final_H={rec.final_H:.6f} "
        f"iterations={rec.iterations} converged={rec.converged} mean_distance={rec.mean_distance:.4f}"
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "coverage.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "H"])
            for i, h in enumerate(rec.trace.coverage_history):
                w.writerow([i, repr(h)])
        with open(out / "final_positions.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["sensor", "x", "y", "distance"])
            for i, ((x, y), d) in enumerate(zip(rec.trace.final, rec.trace.per_sensor_distance)):
                w.writerow([i, repr(float(x)), repr(float(y)), repr(float(d))])
        if args.plots:
            emit_plots(rec.trace, prepared.field, sc.domain, out, prefix=method)
    return 0


def cmd_experiment(args):
    sc = _scenario_from_args(args)
    out = Path(args.out) if args.out else None
    summary, records = run_scenario(sc, out, workers=args.workers)
    print(f"scenario {sc.name}: k={sc.k} epsilon={sc.epsilon} runs={sc.runs}")
    for m, s in summary.stats.items():
        print(
            f"  {m:12s} initial H {s.initial_H[0]:.4f} +- {s.initial_H[1]:.4f}   "
            f"final H {s.final_H[0]:.4f} +- {s.final_H[1]:.4f}   "
            f"distance {s.mean_distance[0]:.4f} +- {s.mean_distance[1]:.4f}   "
            f"converged {s.converged}/{s.runs}"
        )
    print(f"  improvement initial coverage {summary.improvement_initial_pct:.1f}%")
    print(f"  improvement distance         {summary.improvement_distance_pct:.1f}%")
    if out is not None and args.plots:
        emit_plots(records, prepare(sc).field, sc.domain, out, prefix=sc.name)
    return 0


def cmd_check(args):
    results = checks.run_all(seed=args.seed or 0, quick=args.quick)
    for r in results:
        print(r.line())
    ok = checks.all_passed(results)
    print("ALL CHECKS PASSED" if ok else "SOME CHECKS FAILED")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="cover", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw one initial configuration")
    _add_common(p)
    p.add_argument("--run-id", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("descend", help="run one Lloyd descent")
    _add_common(p)
    p.add_argument("--run-id", type=int, default=0)
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("experiment", help="batch of runs for every method")
    _add_common(p)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("check", help="verify the coverage and seeding bounds")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="reduced instance counts")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
