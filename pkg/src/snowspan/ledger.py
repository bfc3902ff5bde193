"""Charging ledger: Hamiltonian path, per-level pivots, auxiliary paths, loads.

The pipeline lower-bounds the net radii sum by the weight of a union of
per-level pivot paths, then redistributes that weight onto the Hamiltonian
path edges (proportionally to their share of base-metric path distance) and
checks every counting and load inequality the construction promises, with
explicit constants.

Two pivot modes exist. ``general`` is the metric-free construction: level-i
pivots are picked by a greedy scan with snowflake-distance threshold
2^(i-1), and auxiliary edges all weigh 2^(i-1). ``grid-intuition`` is the
unit-grid special case (alpha = 1/2 only): pivots at fixed stride 2^(2i) and
auxiliary edges weighing the actual snowflake distance 2^i, which reproduces
the closed-form grid loads exactly. Lemma-style verification runs only in
general mode.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import MetricView, PointSet, hierarchy_level_count, require_unit_min, summarize
from .nets import NetHierarchy, sum_of_radii
from .spanners import mst

__all__ = [
    "HamiltonianPath",
    "PivotLevels",
    "AuxiliaryGraph",
    "LoadTable",
    "LedgerReport",
    "CheckResult",
    "charge_constant",
    "hamiltonian_path",
    "build_pivots",
    "build_auxiliary_graph",
    "compute_loads",
    "verify_ledger",
    "save_ledger_report",
]

OBSERVATION2_RTOL = 1e-9


def charge_constant(alpha: float) -> float:
    """Per-edge load bound constant C(alpha) = 2 + 2 / (1 - 2^(1 - 1/alpha))."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return 2.0 + 2.0 / (1.0 - 2.0 ** (1.0 - 1.0 / alpha))


@dataclass
class HamiltonianPath:
    """Path order v_1..v_n with per-step distances and base-metric prefix sums.

    ``prefix_base[k] - prefix_base[j]`` is the path distance between
    positions j < k under the base (non-snowflake) metric.
    """

    order: np.ndarray
    base_steps: np.ndarray
    snow_steps: np.ndarray
    prefix_base: np.ndarray
    weight_base: float
    weight_snowflake: float
    alpha: float

    @property
    def n(self) -> int:
        return self.order.size

    def path_distance(self, j: int, k: int) -> float:
        return float(self.prefix_base[k] - self.prefix_base[j])


@dataclass
class PivotLevels:
    """Per-level pivot positions within the path, levels 0 .. ell-1.

    ``consec_snowflake[i]`` holds snowflake distances between consecutive
    level-i pivots; ``order`` and ``view`` are carried so verification can
    re-derive distances without extra arguments.
    """

    mode: str
    ell: int
    positions: list
    consec_snowflake: list
    order: np.ndarray
    view: MetricView


@dataclass
class AuxiliaryGraph:
    """Union of per-level pivot paths; levels[i] = (jpos, kpos, weights)."""

    mode: str
    ell: int
    levels: list
    total_weight: float

    def edge_counts(self) -> list:
        return [len(w) for _, _, w in self.levels]


@dataclass
class LoadTable:
    """Per-path-edge loads, split by level, with the bound constants."""

    alpha: float
    c_alpha: float
    per_level: np.ndarray  # shape (ell, n-1)
    per_edge: np.ndarray  # shape (n-1,)
    eta: np.ndarray  # snowflake length of each path edge
    t: np.ndarray  # ceil(log2(eta)) per path edge
    total: float


def hamiltonian_path(points: PointSet, snowflake: MetricView) -> HamiltonianPath:
    """Preorder walk of the exact snowflake-metric MST, rooted at index 0.

    Children are visited in ascending index order. By the triangle
    inequality the walk weighs at most twice the MST.
    """
    if snowflake.kind != "snowflake":
        raise ValueError("hamiltonian_path requires a snowflake metric view")
    n = points.n
    if n == 0:
        raise ValueError("empty point set")
    base = snowflake.base
    if n == 1:
        order = np.array([0])
        empty = np.array([])
        return HamiltonianPath(order, empty, empty, np.array([0.0]), 0.0, 0.0, snowflake.alpha)
    bp = base.pairwise()
    iu = np.triu_indices(n, k=1)
    require_unit_min(float(bp[iu].min()))

    tree = mst(points, snowflake)
    adj = [[] for _ in range(n)]
    for u, v in zip(tree.us, tree.vs):
        adj[int(u)].append(int(v))
        adj[int(v)].append(int(u))
    seen = np.zeros(n, dtype=bool)
    order = []
    stack = [0]
    while stack:
        x = stack.pop()
        if seen[x]:
            continue
        seen[x] = True
        order.append(x)
        for y in sorted(adj[x], reverse=True):
            if not seen[y]:
                stack.append(y)
    order = np.array(order)

    base_steps = base.edge_weights(order[:-1], order[1:])
    snow_steps = snowflake.edge_weights(order[:-1], order[1:])
    prefix = np.concatenate([[0.0], np.cumsum(base_steps)])
    return HamiltonianPath(
        order=order,
        base_steps=base_steps,
        snow_steps=snow_steps,
        prefix_base=prefix,
        weight_base=math.fsum(base_steps),
        weight_snowflake=math.fsum(snow_steps),
        alpha=snowflake.alpha,
    )


def _pivot_scan(order: np.ndarray, dmat: np.ndarray, thr: float) -> np.ndarray:
    """First position 0, then greedily the first later position at snowflake
    distance >= thr from the current pivot."""
    pivots = [0]
    row = dmat[order[0]]
    for k in range(1, order.size):
        if row[order[k]] >= thr:
            pivots.append(k)
            row = dmat[order[k]]
    return np.array(pivots)


def build_pivots(path: HamiltonianPath, snowflake: MetricView, mode: str = "general") -> PivotLevels:
    """Level-i pivot positions for i in [0, ell-1]; level 0 is every point."""
    if snowflake.kind != "snowflake":
        raise ValueError("build_pivots requires a snowflake metric view")
    n = path.n
    summary = summarize(snowflake.points, snowflake)
    ell = hierarchy_level_count(n, summary.diameter)
    dmat = snowflake.pairwise()

    if mode == "general":
        positions = [np.arange(n)]
        for i in range(1, ell):
            positions.append(_pivot_scan(path.order, dmat, 2.0 ** (i - 1)))
    elif mode == "grid-intuition":
        _require_unit_grid_path(path, snowflake)
        max_stride = 4 ** max(0, ell - 1)
        if (n - 1) % max_stride != 0:
            raise ValueError(
                f"grid-intuition mode needs (n-1) divisible by {max_stride}; "
                f"use n = 2^k + 1 grids"
            )
        positions = [np.arange(0, n, 4**i) for i in range(ell)]
    else:
        raise ValueError(f"unknown pivot mode: {mode!r}")

    consec = []
    for pos in positions:
        consec.append(snowflake.edge_weights(path.order[pos[:-1]], path.order[pos[1:]]))
    return PivotLevels(
        mode=mode,
        ell=ell,
        positions=positions,
        consec_snowflake=consec,
        order=path.order.copy(),
        view=snowflake,
    )


def _require_unit_grid_path(path: HamiltonianPath, snowflake: MetricView) -> None:
    pts = snowflake.points
    ok = (
        snowflake.alpha == 0.5
        and snowflake.base.kind == "lp"
        and pts.is_coordinate
        and pts.dim == 1
        and np.array_equal(path.order, np.arange(path.n))
        and np.all(np.diff(pts.coords[:, 0]) == 1.0)
    )
    if not ok:
        raise ValueError(
            "grid-intuition mode requires a unit-spaced 1-D grid in natural "
            "order under an alpha = 1/2 snowflake"
        )


def build_auxiliary_graph(pivots: PivotLevels) -> AuxiliaryGraph:
    """Per-level simple paths over the pivots.

    General mode assigns every level-i edge weight 2^(i-1) (dominated by the
    actual snowflake distance); grid-intuition keeps the snowflake distance.
    """
    levels = []
    all_w = []
    for i, pos in enumerate(pivots.positions):
        jpos, kpos = pos[:-1], pos[1:]
        if pivots.mode == "general":
            w = np.full(jpos.size, 2.0 ** (i - 1))
        else:
            w = np.asarray(pivots.consec_snowflake[i], dtype=float)
        levels.append((jpos, kpos, w))
        all_w.append(w)
    total = math.fsum(np.concatenate(all_w)) if all_w else 0.0
    return AuxiliaryGraph(mode=pivots.mode, ell=pivots.ell, levels=levels, total_weight=total)


def compute_loads(aux: AuxiliaryGraph, path: HamiltonianPath, base: MetricView) -> LoadTable:
    """Distribute each auxiliary edge's weight over the path edges it spans.

    An edge over positions [j, k] puts weight * delta(v_l, v_{l+1}) /
    delta_Pi(v_j, v_k) on each path edge l in [j, k), so its weight is
    conserved exactly; the divisor is the base-metric path distance.
    """
    if base.kind == "snowflake":
        raise ValueError("loads are distributed under the base (non-snowflake) view")
    nedge = path.n - 1
    per_level = np.zeros((aux.ell, max(nedge, 0)))
    for i, (jpos, kpos, wts) in enumerate(aux.levels):
        for j, k, om in zip(jpos.tolist(), kpos.tolist(), wts.tolist()):
            dpi = path.prefix_base[k] - path.prefix_base[j]
            if dpi <= 0.0:
                raise ValueError(
                    f"zero path distance between distinct pivots at positions {j},{k}; "
                    "duplicate points in the input"
                )
            per_level[i, j:k] += om * path.base_steps[j:k] / dpi
    per_edge = per_level.sum(axis=0) if aux.ell else np.zeros(nedge)
    eta = np.asarray(path.snow_steps, dtype=float)
    t = np.ceil(np.log2(eta)).astype(int) if nedge else np.zeros(0, dtype=int)
    alpha = path.alpha
    return LoadTable(
        alpha=alpha,
        c_alpha=charge_constant(alpha),
        per_level=per_level,
        per_edge=per_edge,
        eta=eta,
        t=t,
        total=math.fsum(per_edge),
    )


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    margin: float


@dataclass
class LedgerReport:
    ok: bool
    n: int
    alpha: float
    c_alpha: float
    aux_weight: float
    radii_total: float
    max_load_ratio: float
    per_level: list  # rows {i, pivots, net_points, aux_edges, radii}
    checks: dict

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "n": self.n,
            "alpha": self.alpha,
            "c_alpha": self.c_alpha,
            "aux_weight": self.aux_weight,
            "radii_total": self.radii_total,
            "max_load_ratio": self.max_load_ratio,
            "per_level": self.per_level,
            "checks": {
                name: {"passed": c.passed, "margin": c.margin} for name, c in self.checks.items()
            },
        }


def verify_ledger(h: NetHierarchy, pivots: PivotLevels, aux: AuxiliaryGraph,
                  loads: LoadTable, alpha: float) -> LedgerReport:
    """Run every counting and load check of the charging construction.

    Checks, all on the same snowflaked instance in general mode:
      pivot_counts        level pivot count >= net-point count
      aux_edge_counts     |E_i| = |P_i| - 1 >= |P_i|/2 >= |N_i|/2
      aux_weight_vs_radii total auxiliary weight >= radii sum / 4
      load_conservation   sum of path-edge loads equals the auxiliary weight
      interval_locality   points between consecutive pivots stay within
                          2^(i-1) of the leading pivot, hence pairwise < 2^i
      weight_domination   auxiliary edge weights never exceed snowflake distance
      per_edge_load_bound load <= C(alpha) * snowflake edge length
      load_split_bounds   the low-level part is < 2*eta and the high-level
                          part <= (C(alpha) - 2) * eta, per path edge
      aux_weight_vs_path  total auxiliary weight <= C(alpha) * path weight
    """
    if pivots.mode != "general":
        raise ValueError(f"ledger verification runs in general mode, got {pivots.mode!r}")
    if aux.mode != "general":
        raise ValueError("auxiliary graph was not built in general mode")
    n = pivots.order.size
    if h.n != n or loads.per_edge.size != n - 1:
        raise ValueError("hierarchy, pivots and loads disagree on the instance size")
    if pivots.ell != h.ell:
        raise ValueError(f"level count mismatch: pivots {pivots.ell}, hierarchy {h.ell}")
    if loads.alpha != alpha:
        raise ValueError(f"alpha mismatch: loads built with {loads.alpha}, asked {alpha}")

    c_alpha = charge_constant(alpha)
    checks = {}
    radii = sum_of_radii(h)
    per_level_rows = []
    p_counts = np.array([pos.size for pos in pivots.positions])
    n_counts = np.array([len(h.levels[i]) for i in range(h.ell)])
    e_counts = np.array(aux.edge_counts())
    for i in range(h.ell):
        per_level_rows.append(
            {
                "i": i,
                "pivots": int(p_counts[i]),
                "net_points": int(n_counts[i]),
                "aux_edges": int(e_counts[i]),
                "radii": n_counts[i] * 2.0**i,
            }
        )

    checks["pivot_counts"] = CheckResult(
        bool(np.all(p_counts >= n_counts)), float((p_counts - n_counts).min())
    )
    counts_ok = (
        np.all(e_counts == p_counts - 1)
        and np.all(p_counts >= 2)
        and np.all(e_counts >= 0.5 * p_counts)
        and np.all(e_counts >= 0.5 * n_counts)
    )
    checks["aux_edge_counts"] = CheckResult(
        bool(counts_ok), float((e_counts - 0.5 * n_counts).min())
    )
    checks["aux_weight_vs_radii"] = CheckResult(
        aux.total_weight >= radii.total / 4.0, aux.total_weight - radii.total / 4.0
    )
    rel_err = abs(loads.total - aux.total_weight) / aux.total_weight
    checks["load_conservation"] = CheckResult(
        rel_err <= OBSERVATION2_RTOL, OBSERVATION2_RTOL - rel_err
    )
    checks["interval_locality"] = _check_interval_locality(pivots)
    dom_margin = math.inf
    for i, (_, _, w) in enumerate(aux.levels):
        if w.size:
            dom_margin = min(dom_margin, float((pivots.consec_snowflake[i] - w).min()))
    checks["weight_domination"] = CheckResult(dom_margin >= 0.0, dom_margin)

    ratios = loads.per_edge / loads.eta
    max_ratio = float(ratios.max()) if ratios.size else 0.0
    checks["per_edge_load_bound"] = CheckResult(max_ratio <= c_alpha, c_alpha - max_ratio)

    if loads.per_edge.size and h.ell:
        lvl_idx = np.arange(h.ell)[:, None]
        cutoff = np.minimum(loads.t, h.ell - 1)[None, :]
        low_mask = lvl_idx <= cutoff
        low = (loads.per_level * low_mask).sum(axis=0)
        high = (loads.per_level * ~low_mask).sum(axis=0)
        low_margin = float((2.0 * loads.eta - low).min())
        high_margin = float(((c_alpha - 2.0) * loads.eta - high).min())
        split_ok = low_margin > 0.0 and high_margin >= 0.0
    else:
        low_margin = high_margin = math.inf
        split_ok = True
    checks["load_split_bounds"] = CheckResult(split_ok, min(low_margin, high_margin))

    path_weight = math.fsum(loads.eta)
    checks["aux_weight_vs_path"] = CheckResult(
        aux.total_weight <= c_alpha * path_weight,
        c_alpha * path_weight - aux.total_weight,
    )

    return LedgerReport(
        ok=all(c.passed for c in checks.values()),
        n=n,
        alpha=alpha,
        c_alpha=c_alpha,
        aux_weight=aux.total_weight,
        radii_total=radii.total,
        max_load_ratio=max_ratio,
        per_level=per_level_rows,
        checks=checks,
    )


def _check_interval_locality(pivots: PivotLevels) -> CheckResult:
    """Both halves of the pivot-interval property, exhaustively.

    Every point between consecutive level-i pivots (and after the last one)
    is strictly within 2^(i-1) of the leading pivot, and any two points in
    the same interval are strictly within 2^i of each other.
    """
    dmat = pivots.view.pairwise()
    order = pivots.order
    n = order.size
    margin = math.inf
    ok = True
    for i in range(1, pivots.ell):
        thr_half = 2.0 ** (i - 1)
        thr_full = 2.0**i
        pos = pivots.positions[i]
        bounds = np.concatenate([pos, [n]])
        for s, e in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
            pts = order[s:e]
            from_pivot = float(dmat[order[s], pts].max())
            pair_max = float(dmat[np.ix_(pts, pts)].max()) if pts.size > 1 else 0.0
            margin = min(margin, thr_half - from_pivot, thr_full - pair_max)
            if from_pivot >= thr_half or pair_max >= thr_full:
                ok = False
    return CheckResult(ok, margin)


def save_ledger_report(report: LedgerReport, path) -> None:
    Path(path).write_text(json.dumps(report.to_dict()) + "\n")
