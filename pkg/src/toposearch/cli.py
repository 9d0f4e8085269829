"""Command-line interface.

Subcommands: ``gen`` materializes a benchmark suite, ``solve`` runs one
order-search method on a data table, ``export-mip`` writes an integer model
in LP format, ``bench`` executes a config end to end, and ``metrics``
scores a predicted arc list against a known one. Outputs are deterministic
for fixed seeds except wall-time fields.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import algorithms, datagen, graphs, harness, lasso, mip

_SOLVE_METHODS = ("gd", "ir", "gd10", "ir10")
_MODEL_BUILDERS = {"to": mip.build_order_mip,
                   "in": mip.build_triangle_mip,
                   "cp": mip.build_cycle_mip}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toposearch",
        description="Topological-order search and MIP export for acyclic "
                    "network learning.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a benchmark suite")
    gen.add_argument("--suite", required=True, choices=datagen.SUITE_NAMES)
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--seed", type=int, default=0, help="master seed")
    gen.add_argument("--limit", type=int, default=None,
                     help="only the first N instances")

    solve = sub.add_parser("solve", help="run one method on a data table")
    solve.add_argument("--data", required=True, help="standardized CSV table")
    solve.add_argument("--method", required=True, choices=_SOLVE_METHODS)
    solve.add_argument("--lambda", dest="lam", type=float, required=True,
                       help="L1 penalty")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--out", default=None, help="solution JSON path "
                       "(stdout when omitted)")

    export = sub.add_parser("export-mip", help="build a model and write LP")
    export.add_argument("--data", required=True, help="standardized CSV table")
    export.add_argument("--model", required=True, choices=sorted(_MODEL_BUILDERS))
    export.add_argument("--lambda", dest="lam", type=float, required=True)
    export.add_argument("--out", required=True, help="LP file path")

    bench = sub.add_parser("bench", help="run an experiment config")
    bench.add_argument("--config", required=True, help="JSON config file")
    bench.add_argument("--out", required=True, help="output directory")
    bench.add_argument("--jobs", type=int, default=None,
                       help="parallel workers (overrides the config)")

    metrics = sub.add_parser("metrics", help="score predicted arcs")
    metrics.add_argument("--pred", required=True, help="predicted arc list CSV")
    metrics.add_argument("--truth", required=True, help="true arc list CSV")

    return parser


def _cmd_gen(args) -> int:
    out = Path(args.out)
    specs = datagen.suite_specs(args.suite, args.seed, limit=args.limit)
    for spec in specs:
        x, truth = datagen.make_instance(spec)
        datagen.save_instance(out, spec, x, truth)
    print(f"wrote {len(specs)} {args.suite} instances to {out}")
    return 0


def _cmd_solve(args) -> int:
    x = datagen.load_csv(args.data)
    started = time.monotonic()
    if args.method == "gd":
        sol = algorithms.gradient_descent(
            x, args.lam, algorithms.GdParams(seed=args.seed))
    elif args.method == "ir":
        sol = algorithms.iterative_reordering(
            x, args.lam, algorithms.IrParams(seed=args.seed))
    else:
        algo = args.method[:2]
        seeds = range(args.seed, args.seed + harness.MULTI_START_WIDTH)
        sol = algorithms.multi_start(algo, x, args.lam, seeds)
    elapsed = time.monotonic() - started
    support = graphs.support(sol.y)
    edges = [{"from": j + 1, "to": k + 1, "weight": float(sol.y[j, k])}
             for j in range(x.m) for k in range(x.m) if support[j, k]]
    payload = {
        "data": args.data,
        "method": args.method,
        "lambda": args.lam,
        "seed": args.seed,
        "objective": float(sol.objective),
        "arc_count": int(support.sum()),
        "order": [int(q) for q in sol.order],
        "order_hash": sol.order_hash(),
        "edges": edges,
        "wall_time_seconds": elapsed,
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        print(f"objective={datagen.fmt_float(sol.objective)} "
              f"arcs={int(support.sum())} -> {args.out}")
    return 0


def _cmd_export_mip(args) -> int:
    x = datagen.load_csv(args.data)
    big_m = mip.estimate_big_m(x, args.lam)
    model = _MODEL_BUILDERS[args.model](x, args.lam, big_m)
    path = mip.export_lp(model, args.out)
    counts = model.counts()
    print(f"kind={args.model} m={x.m} variables={counts['variables']} "
          f"binaries={counts['binaries']} rows={counts['rows']} "
          f"bigM={datagen.fmt_float(big_m)} -> {path}")
    return 0


def _cmd_bench(args) -> int:
    config = harness.BenchConfig.from_file(args.config)
    summary = harness.run_experiment(config, args.out, jobs=args.jobs)
    print(f"instances={summary['instances']} records={summary['records']} "
          f"failed={summary['failed']} -> {summary['runs_csv']}")
    return 0


def _cmd_metrics(args) -> int:
    pred_raw = datagen.load_edges_csv(args.pred)
    truth_raw = datagen.load_edges_csv(args.truth)
    m = max(pred_raw.shape[0], truth_raw.shape[0])
    pred = datagen.load_edges_csv(args.pred, m=m)
    truth = datagen.load_edges_csv(args.truth, m=m)
    pred_adj = graphs.support(pred, tol=0.0)
    truth_adj = graphs.support(truth, tol=0.0)
    dtp, utp = harness.true_positive(pred_adj, truth_adj)
    print(f"truth_arcs={int(truth_adj.sum())} pred_arcs={int(pred_adj.sum())} "
          f"dTP={datagen.fmt_float(dtp)} uTP={datagen.fmt_float(utp)}")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "export-mip": _cmd_export_mip,
    "bench": _cmd_bench,
    "metrics": _cmd_metrics,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
