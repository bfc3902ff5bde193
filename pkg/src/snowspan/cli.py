"""Command-line surface: gen, build, analyze, ledger, sweep, lp-check."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import analysis as an
from . import datasets, harness, ledger, nets, spanners, transfer
from .metrics import PointSet, parse_metric


def _parse_p(text: str):
    return math.inf if text in ("inf", "linf") else float(text)


def _write_or_print(payload: dict, out):
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _cmd_gen(args) -> int:
    points = datasets.gen(args.kind, args.n, args.dim, args.seed)
    points.save(args.out)
    return 0


def _cmd_build(args) -> int:
    points = PointSet.load(args.points)
    metric = parse_metric(args.metric, points)
    if args.spanner == "net-tree":
        h = nets.build_hierarchy(points, metric)
        gamma = args.gamma if args.gamma is not None else spanners.gamma_for_epsilon(args.epsilon)
        g = spanners.net_tree_spanner(h, metric, gamma)
    elif args.spanner == "greedy":
        g = spanners.greedy_spanner(points, metric, args.t)
    else:  # mst
        g = spanners.mst(points, metric)
    spanners.save_graph(g, args.out)
    return 0


def _cmd_analyze(args) -> int:
    points = PointSet.load(args.points)
    metric = parse_metric(args.metric, points)
    g = spanners.load_graph(args.graph)
    pairs = "all" if args.pairs == "all" else "sample"
    report = an.analyze(g, points, metric, pairs=pairs, k=args.k, seed=args.seed)
    _write_or_print(report.to_dict(), args.out)
    if args.target_stretch is not None and report.max_stretch > args.target_stretch:
        print(
            f"stretch {report.max_stretch} exceeds target {args.target_stretch}",
            file=sys.stderr,
        )
        return 1
    return 0


def _cmd_ledger(args) -> int:
    points = PointSet.load(args.points)
    metric = parse_metric(f"snowflake:{args.base}:{args.alpha}", points)
    hierarchy = nets.build_hierarchy(points, metric) if args.mode == "general" else None
    report = harness._run_ledger(points, metric, args.mode, hierarchy)
    _write_or_print(report, args.out)
    return 0 if report["ok"] else 1


def _cmd_sweep(args) -> int:
    ns = [int(x) for x in args.ns.split(",")]
    alphas = [float(x) for x in args.alphas.split(",")]
    epsilons = [float(x) for x in args.epsilons.split(",")] if args.epsilons else []
    analyses = tuple(args.analyses.split(","))
    rows = harness.sweep(
        args.kind, ns, alphas, epsilons,
        dim=args.dim, seed=args.seed, analyses=analyses, timing=args.timing,
    )
    harness.write_sweep_csv(rows, args.out)
    return 0 if all(r["status"] == "ok" for r in rows) else 1


def _cmd_lp_check(args) -> int:
    failures = 0
    if args.transfer:
        points = PointSet.load(args.points)
        report = transfer.transfer_experiment(points, args.t, _parse_p(args.p))
        _write_or_print(report.to_dict(), args.out)
        return 0 if report.ok else 1
    if args.suite in ("scalar", "all"):
        in_range, violations = transfer.scalar_lemma_trials(args.trials, args.seed)
        print(f"scalar inequality: {in_range} in-range trials, {len(violations)} violations")
        for v in violations:
            print(f"  violation: {v}")
        failures += len(violations)
    if args.suite in ("vector", "all"):
        trials = max(1, args.trials // 10)
        in_range, violations = transfer.vector_lemma_trials(trials, args.seed)
        print(f"vector inequality: {in_range} in-range trials, {len(violations)} violations")
        for v in violations:
            print(f"  violation: {v}")
        failures += len(violations)
    if args.suite in ("decompose", "all"):
        trials = max(1, args.trials // 10)
        recon, ortho = transfer.decompose_trials(trials, args.seed)
        print(f"decompose: worst reconstruction {recon}, worst orthogonality {ortho}")
        if recon > 1e-12 or ortho > 1e-10:
            failures += 1
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snowspan",
        description="Light spanners for snowflake doubling metrics at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a point file")
    p.add_argument("--kind", required=True, choices=datasets.KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("build", help="build a spanner or MST over a point file")
    p.add_argument("--points", required=True)
    p.add_argument("--metric", default="l2")
    p.add_argument("--spanner", choices=("net-tree", "greedy", "mst"), default="net-tree")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_build)

    p = sub.add_parser("analyze", help="measure stretch/lightness/hops/degree")
    p.add_argument("--graph", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--metric", default="l2")
    p.add_argument("--pairs", choices=("all", "k"), default="all")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--target-stretch", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("ledger", help="run the charging-ledger pipeline")
    p.add_argument("--points", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--base", default="l2")
    p.add_argument("--mode", choices=("general", "grid-intuition"), default="general")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_ledger)

    p = sub.add_parser("sweep", help="grid of (n, alpha, epsilon) cells to CSV")
    p.add_argument("--kind", default="grid", choices=datasets.KINDS)
    p.add_argument("--ns", required=True, help="comma-separated n values")
    p.add_argument("--alphas", required=True, help="comma-separated alphas; 1.0 = no snowflake")
    p.add_argument("--epsilons", default="", help="comma-separated epsilons (optional)")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--analyses", default="radii,ledger")
    p.add_argument("--timing", action="store_true", help="record wall time per cell")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("lp-check", help="inequality checkers and transfer experiment")
    p.add_argument("--suite", choices=("scalar", "vector", "decompose", "all"), default="all")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--transfer", action="store_true")
    p.add_argument("--points", default=None)
    p.add_argument("--t", type=float, default=1.1)
    p.add_argument("--p", default="inf")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_lp_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
