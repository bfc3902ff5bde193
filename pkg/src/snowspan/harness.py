"""Experiment orchestration: single runs, parameter sweeps, CSV emission.

A run executes build -> analyze (-> ledger) on one configuration and writes
its artifacts; a sweep fans a grid of (n, alpha, epsilon) cells over a
bounded worker pool (SNOWSPAN_THREADS) and assembles rows in deterministic
order regardless of completion order. Wall time is only recorded when
explicitly requested, so default outputs are byte-reproducible.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis as an
from . import datasets, ledger, nets, spanners
from .metrics import MetricView, PointSet, parse_metric

__all__ = [
    "ExperimentConfig",
    "RunResult",
    "run",
    "sweep",
    "SWEEP_COLUMNS",
    "write_sweep_csv",
]

SWEEP_COLUMNS = [
    "n",
    "alpha",
    "epsilon",
    "lightness",
    "max_stretch",
    "hop_diameter",
    "max_degree",
    "radii_over_mst",
    "aux_over_mst",
    "wall_time",
    "status",
]


@dataclass
class ExperimentConfig:
    dataset: dict  # {"kind", "n", "dim", "seed"} or {"file": path}
    metric: str = "l2"
    spanner: dict | None = None  # {"kind": "net-tree", "epsilon"|"gamma": x} | {"kind": "greedy", "t": x}
    analyses: tuple = ("stretch", "lightness", "hops", "degree")
    ledger_mode: str | None = None  # "general" | "grid-intuition"
    pairs: str = "all"
    sample_k: int | None = None
    sample_seed: int | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        cfg = dict(d)
        if "analyses" in cfg:
            cfg["analyses"] = tuple(cfg["analyses"])
        return cls(**cfg)


@dataclass
class RunResult:
    ok: bool
    notices: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)


def _load_points(dataset: dict) -> PointSet:
    if "file" in dataset:
        return PointSet.load(dataset["file"])
    return datasets.gen(
        dataset["kind"], dataset["n"], dataset.get("dim", 1), dataset.get("seed")
    )


def run(config: ExperimentConfig, out_dir=None) -> RunResult:
    """Execute one configuration; ok is True iff every requested
    verification (stretch/hop targets, ledger checks) passes."""
    result = RunResult(ok=True)
    out = Path(out_dir) if out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)

    points = _load_points(config.dataset)
    metric = parse_metric(config.metric, points)

    if points.n == 1:
        result.notices.append("single point: spanner is empty, analyses skipped")
        if config.spanner and out:
            g = spanners.SpannerGraph(1, [], [], [], metric_tag=metric.spec)
            spanners.save_graph(g, out / "graph.json")
            result.outputs["graph"] = str(out / "graph.json")
        return result

    hierarchy = None
    need_hierarchy = (
        (config.spanner or {}).get("kind") == "net-tree" or config.ledger_mode == "general"
    )
    if need_hierarchy:
        hierarchy = nets.build_hierarchy(points, metric)

    graph = None
    if config.spanner:
        kind = config.spanner.get("kind")
        if kind == "net-tree":
            gamma = config.spanner.get("gamma")
            if gamma is None:
                gamma = spanners.gamma_for_epsilon(config.spanner["epsilon"])
            graph = spanners.net_tree_spanner(hierarchy, metric, gamma)
        elif kind == "greedy":
            graph = spanners.greedy_spanner(points, metric, config.spanner["t"])
        else:
            raise ValueError(f"unknown spanner kind: {kind!r}")
        if out:
            spanners.save_graph(graph, out / "graph.json")
            result.outputs["graph"] = str(out / "graph.json")

    wants_analysis = graph is not None and any(
        a in config.analyses for a in ("stretch", "lightness", "hops", "degree")
    )
    if wants_analysis:
        report = an.analyze(
            graph, points, metric, pairs=config.pairs, k=config.sample_k, seed=config.sample_seed
        )
        result.reports["analysis"] = report.to_dict()
        if out:
            an.save_report(report, out / "analysis.json")
            result.outputs["analysis"] = str(out / "analysis.json")
        eps = (config.spanner or {}).get("epsilon")
        if eps is not None:
            if report.max_stretch > 1.0 + eps:
                result.ok = False
                result.notices.append(
                    f"stretch verification failed: {report.max_stretch} > {1 + eps}"
                )
            if report.hop_diameter > 2 * hierarchy.ell + 2:
                result.ok = False
                result.notices.append(
                    f"hop diameter {report.hop_diameter} exceeds {2 * hierarchy.ell + 2}"
                )
        t = (config.spanner or {}).get("t")
        if t is not None and report.max_stretch > t:
            result.ok = False
            result.notices.append(f"stretch verification failed: {report.max_stretch} > {t}")

    if config.ledger_mode:
        ledger_report = _run_ledger(points, metric, config.ledger_mode, hierarchy)
        result.reports["ledger"] = ledger_report
        if out:
            path = out / "ledger.json"
            path.write_text(json.dumps(ledger_report) + "\n")
            result.outputs["ledger"] = str(path)
        if not ledger_report["ok"]:
            result.ok = False
            result.notices.append("ledger verification failed")
    return result


def _run_ledger(points: PointSet, metric: MetricView, mode: str, hierarchy) -> dict:
    if metric.kind != "snowflake":
        raise ValueError("ledger requires a snowflake metric (alpha in (0,1))")
    path = ledger.hamiltonian_path(points, metric)
    pivots = ledger.build_pivots(path, metric, mode=mode)
    aux = ledger.build_auxiliary_graph(pivots)
    loads = ledger.compute_loads(aux, path, metric.base)
    if mode == "general":
        report = ledger.verify_ledger(hierarchy, pivots, aux, loads, metric.alpha)
        return report.to_dict()
    rel_err = abs(loads.total - aux.total_weight) / aux.total_weight
    return {
        "ok": bool(rel_err <= ledger.OBSERVATION2_RTOL),
        "mode": mode,
        "n": points.n,
        "alpha": metric.alpha,
        "aux_weight": aux.total_weight,
        "load_total": loads.total,
        "max_per_edge_load": float(loads.per_edge.max()),
        "per_edge_loads": loads.per_edge.tolist(),
        "edge_counts": aux.edge_counts(),
    }


def _sweep_cell(kind, n, alpha, epsilon, dim, seed, analyses, timing):
    t0 = time.perf_counter()
    row = {c: "" for c in SWEEP_COLUMNS}
    row.update(n=n, alpha=alpha, epsilon="" if epsilon is None else epsilon, status="ok")
    try:
        points = datasets.gen(kind, n, dim, seed)
        spec = "l2" if alpha == 1.0 else f"snowflake:l2:{alpha}"
        metric = parse_metric(spec, points)
        hierarchy = nets.build_hierarchy(points, metric)
        mst_weight = math.fsum(spanners.mst(points, metric).ws)
        if "radii" in analyses:
            row["radii_over_mst"] = nets.sum_of_radii(hierarchy).total / mst_weight
        if "ledger" in analyses and alpha != 1.0:
            report = _run_ledger(points, metric, "general", hierarchy)
            row["aux_over_mst"] = report["aux_weight"] / mst_weight
            if not report["ok"]:
                row["status"] = "fail:ledger"
        if "stretch" in analyses and epsilon is not None:
            gamma = spanners.gamma_for_epsilon(epsilon)
            g = spanners.net_tree_spanner(hierarchy, metric, gamma)
            report = an.analyze(g, points, metric)
            row["lightness"] = report.lightness
            row["max_stretch"] = report.max_stretch
            row["hop_diameter"] = report.hop_diameter
            row["max_degree"] = report.max_degree
            if report.max_stretch > 1.0 + epsilon:
                row["status"] = "fail:stretch"
    except Exception as exc:  # per-cell failures recorded, sweep continues
        row["status"] = f"error:{exc}"
    if timing:
        row["wall_time"] = time.perf_counter() - t0
    return row


def sweep(kind, ns, alphas, epsilons, dim=1, seed=0,
          analyses=("radii", "ledger"), timing=False):
    """One row per (n, alpha, epsilon) cell, sorted by that key.

    Cells run on a thread pool capped by SNOWSPAN_THREADS (default 1);
    per-cell errors land in the status column and do not stop the sweep.
    """
    eps_list = list(epsilons) if epsilons else [None]
    cells = sorted(
        (n, a, e) for n in ns for a in alphas for e in eps_list
    )
    workers = max(1, int(os.environ.get("SNOWSPAN_THREADS", "1")))
    if workers == 1:
        rows = [_sweep_cell(kind, n, a, e, dim, seed, analyses, timing) for n, a, e in cells]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(
                pool.map(lambda c: _sweep_cell(kind, *c, dim, seed, analyses, timing), cells)
            )
    return rows


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
