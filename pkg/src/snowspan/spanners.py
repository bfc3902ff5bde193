"""Spanner and MST construction: net-tree spanner, path-greedy spanner, dense Prim.

All constructions are deterministic: ties break on ascending index pairs,
and edge lists are stored sorted with u < v.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .metrics import MetricView, PointSet
from .nets import NetHierarchy

__all__ = [
    "SpannerGraph",
    "net_tree_spanner",
    "greedy_spanner",
    "mst",
    "gamma_for_epsilon",
    "save_graph",
    "load_graph",
]


@dataclass
class SpannerGraph:
    """Weighted undirected graph over point indices (u < v, no duplicates).

    ``levels`` optionally tags each edge with the net level that created it
    (net-tree cross edges); None for level-free constructions.
    """

    n: int
    us: np.ndarray
    vs: np.ndarray
    ws: np.ndarray
    metric_tag: str = ""
    levels: np.ndarray | None = None

    def __post_init__(self):
        self.us = np.asarray(self.us, dtype=int)
        self.vs = np.asarray(self.vs, dtype=int)
        self.ws = np.asarray(self.ws, dtype=float)
        if np.any(self.us >= self.vs):
            raise ValueError("edges must satisfy u < v")
        if self.us.size:
            keys = self.us * self.n + self.vs
            if np.unique(keys).size != keys.size:
                raise ValueError("duplicate edges")

    @property
    def m(self) -> int:
        return self.us.size

    def total_weight(self) -> float:
        return math.fsum(self.ws)

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.us, self.vs]), minlength=self.n)

    def reweighted(self, metric: MetricView) -> np.ndarray:
        """Edge weights recomputed under a (possibly different) metric view."""
        return metric.edge_weights(self.us, self.vs)


def _sorted_graph(n, edges, metric_tag, with_levels):
    # edges: list of (u, v, w) or (u, v, w, level)
    edges.sort(key=lambda e: (e[0], e[1]))
    us = np.array([e[0] for e in edges], dtype=int)
    vs = np.array([e[1] for e in edges], dtype=int)
    ws = np.array([e[2] for e in edges], dtype=float)
    levels = np.array([e[3] for e in edges], dtype=int) if with_levels else None
    return SpannerGraph(n=n, us=us, vs=vs, ws=ws, metric_tag=metric_tag, levels=levels)


def gamma_for_epsilon(epsilon: float) -> float:
    """Default cross-edge reach gamma = 8/epsilon, floored at 2."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return max(2.0, 8.0 / epsilon)


def net_tree_spanner(h: NetHierarchy, metric: MetricView, gamma: float) -> SpannerGraph:
    """Net-tree spanner: level-i cross edges within gamma * 2^i, plus parent edges.

    Cross edges connect distinct i-level net points at distance <= gamma * 2^i
    for every i < ell; an edge keeps the lowest level that produced it.
    Parent edges are added explicitly (they are already cross edges whenever
    gamma >= 2, but keeping them explicit pins the O(ell) hop route).
    """
    if gamma < 2:
        raise ValueError(f"gamma must be >= 2, got {gamma}")
    n = h.n
    d = metric.pairwise()
    chunks_u, chunks_v, chunks_lvl = [], [], []
    for i in range(h.ell):
        net = h.levels[i]
        reach = gamma * 2.0**i
        sub = d[np.ix_(net, net)]
        a, b = np.nonzero(np.triu(sub <= reach, k=1))
        chunks_u.append(net[a])  # net is ascending, a < b
        chunks_v.append(net[b])
        chunks_lvl.append(np.full(a.size, i, dtype=int))
        pq = np.array([[p, q] for p, q in h.parents[i].items() if p != q], dtype=int)
        if pq.size:
            chunks_u.append(pq.min(axis=1))
            chunks_v.append(pq.max(axis=1))
            chunks_lvl.append(np.full(pq.shape[0], i, dtype=int))
    if not chunks_u:
        return _sorted_graph(n, [], metric.spec, with_levels=True)
    us = np.concatenate(chunks_u)
    vs = np.concatenate(chunks_v)
    lvls = np.concatenate(chunks_lvl)
    # dedupe keeping the first (lowest-level) occurrence; keys come out sorted
    keys, first = np.unique(us * n + vs, return_index=True)
    us, vs, lvls = keys // n, keys % n, lvls[first]
    return SpannerGraph(
        n=n, us=us, vs=vs, ws=d[us, vs].astype(float), metric_tag=metric.spec, levels=lvls
    )


def greedy_spanner(points: PointSet, metric: MetricView, t: float) -> SpannerGraph:
    """Path-greedy t-spanner.

    Pairs are examined in ascending distance order (ties by index pair); an
    edge is added iff the current graph distance exceeds t times the metric
    distance, so the result is a t-spanner by construction. Exact graph
    distances are maintained in a dense matrix updated per added edge.
    """
    if t <= 1:
        raise ValueError(f"stretch parameter t must exceed 1, got {t}")
    n = points.n
    if n == 1:
        return _sorted_graph(1, [], metric.spec, with_levels=False)
    d = metric.pairwise()
    iu, iv = np.triu_indices(n, k=1)
    order = np.lexsort((iv, iu, d[iu, iv]))

    g = np.full((n, n), np.inf)
    np.fill_diagonal(g, 0.0)
    edges = []
    for idx in order:
        u, v = int(iu[idx]), int(iv[idx])
        w = d[u, v]
        if g[u, v] > t * w:
            edges.append((u, v, float(w)))
            du = g[:, u].copy()
            dv = g[:, v].copy()
            cand = np.minimum(du[:, None] + w + dv[None, :], dv[:, None] + w + du[None, :])
            np.minimum(g, cand, out=g)
    return _sorted_graph(n, edges, metric.spec, with_levels=False)


def mst(points: PointSet, metric: MetricView) -> SpannerGraph:
    """Exact minimum spanning tree of the complete graph (dense Prim)."""
    n = points.n
    if n == 1:
        return _sorted_graph(1, [], metric.spec, with_levels=False)
    d = metric.pairwise()
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = d[0].copy()
    best_src = np.zeros(n, dtype=int)
    best[0] = np.inf
    edges = []
    for _ in range(n - 1):
        j = int(np.argmin(np.where(in_tree, np.inf, best)))
        s = int(best_src[j])
        edges.append((min(s, j), max(s, j), float(d[s, j])))
        in_tree[j] = True
        closer = d[j] < best
        best_src[closer] = j
        best = np.where(closer, d[j], best)
        best[j] = np.inf
    return _sorted_graph(n, edges, metric.spec, with_levels=False)


def save_graph(g: SpannerGraph, path) -> None:
    rows = []
    for k in range(g.m):
        row = [int(g.us[k]), int(g.vs[k]), float(g.ws[k])]
        if g.levels is not None:
            row.append(int(g.levels[k]))
        rows.append(row)
    Path(path).write_text(
        json.dumps({"n": g.n, "metric": g.metric_tag, "edges": rows}) + "\n"
    )


def load_graph(path) -> SpannerGraph:
    data = json.loads(Path(path).read_text())
    edges = data["edges"]
    with_levels = bool(edges) and len(edges[0]) == 4
    return _sorted_graph(data["n"], [tuple(e) for e in edges], data.get("metric", ""), with_levels)
