"""Exact spanner measurement: stretch, lightness, hop diameter, degree.

Stretch and lightness are always evaluated under the metric view the caller
names, re-deriving edge weights from it; this is what lets an edge set built
under one norm be judged under another.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .metrics import MetricView, PointSet
from .spanners import SpannerGraph, mst

__all__ = [
    "AnalysisReport",
    "max_stretch",
    "lightness",
    "hop_diameter",
    "max_degree",
    "analyze",
    "graph_distances",
    "save_report",
]


def _csr(g: SpannerGraph, weights=None) -> csr_matrix:
    w = g.ws if weights is None else np.asarray(weights, dtype=float)
    return csr_matrix(
        (np.concatenate([w, w]), (np.concatenate([g.us, g.vs]), np.concatenate([g.vs, g.us]))),
        shape=(g.n, g.n),
    )


def _require_connected(g: SpannerGraph) -> None:
    if g.n <= 1:
        return
    ncomp, labels = connected_components(_csr(g, np.ones(g.m)), directed=False)
    if ncomp > 1:
        a = int(np.nonzero(labels == 0)[0][0])
        b = int(np.nonzero(labels == 1)[0][0])
        raise ValueError(f"graph is disconnected: vertices {a} and {b} lie in different components")


def graph_distances(g: SpannerGraph, metric: MetricView, sources=None) -> np.ndarray:
    """Shortest-path distances with edge weights recomputed under `metric`."""
    w = g.reweighted(metric)
    return dijkstra(_csr(g, w), directed=False, indices=sources)


def max_stretch(g: SpannerGraph, metric: MetricView, pairs="all", k=None, seed=None):
    """Max over pairs of d_G(u,v) / delta(u,v), with an achieving pair.

    ``pairs="all"`` is exact; ``pairs="sample"`` draws k unordered pairs with
    a mandatory seed. Ties resolve to the lexicographically smallest pair.
    """
    _require_connected(g)
    n = g.n
    if n < 2:
        return 1.0, None
    dm = metric.pairwise()
    if pairs == "all":
        dist = graph_distances(g, metric)
        iu, iv = np.triu_indices(n, k=1)
    elif pairs == "sample":
        if seed is None or not k:
            raise ValueError("sampled stretch mode requires both k and seed")
        rng = np.random.default_rng(seed)
        total = n * (n - 1) // 2
        flat = rng.choice(total, size=min(k, total), replace=False)
        flat.sort()
        iu_all, iv_all = np.triu_indices(n, k=1)
        iu, iv = iu_all[flat], iv_all[flat]
        sources, inv = np.unique(iu, return_inverse=True)
        dist_rows = graph_distances(g, metric, sources=sources)
        ratios = dist_rows[inv, iv] / dm[iu, iv]
        best = int(np.argmax(ratios))
        return float(ratios[best]), (int(iu[best]), int(iv[best]))
    else:
        raise ValueError(f"unknown pair mode: {pairs!r}")
    ratios = dist[iu, iv] / dm[iu, iv]
    best = int(np.argmax(ratios))
    return float(ratios[best]), (int(iu[best]), int(iv[best]))


def lightness(g: SpannerGraph, points: PointSet, metric: MetricView) -> float:
    """Total edge weight over MST weight, both under `metric`."""
    if g.n < 2:
        raise ValueError("lightness is undefined for fewer than two points")
    w_g = math.fsum(g.reweighted(metric))
    w_mst = math.fsum(mst(points, metric).ws)
    return w_g / w_mst


def hop_diameter(g: SpannerGraph) -> int:
    """Exact max over pairs of the minimum edge count of a connecting path."""
    _require_connected(g)
    if g.n < 2:
        return 0
    hops = dijkstra(_csr(g), directed=False, unweighted=True)
    return int(hops.max())


def max_degree(g: SpannerGraph) -> int:
    return int(g.degrees().max()) if g.n else 0


@dataclass(frozen=True)
class AnalysisReport:
    n: int
    edge_count: int
    total_weight: float
    max_stretch: float
    witness: tuple | None
    lightness: float
    hop_diameter: int
    max_degree: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edge_count": self.edge_count,
            "total_weight": self.total_weight,
            "max_stretch": self.max_stretch,
            "witness": list(self.witness) if self.witness else None,
            "lightness": self.lightness,
            "hop_diameter": self.hop_diameter,
            "max_degree": self.max_degree,
        }


def analyze(g: SpannerGraph, points: PointSet, metric: MetricView,
            pairs="all", k=None, seed=None) -> AnalysisReport:
    stretch, witness = max_stretch(g, metric, pairs=pairs, k=k, seed=seed)
    return AnalysisReport(
        n=g.n,
        edge_count=g.m,
        total_weight=math.fsum(g.reweighted(metric)),
        max_stretch=stretch,
        witness=witness,
        lightness=lightness(g, points, metric) if g.n >= 2 else float("nan"),
        hop_diameter=hop_diameter(g),
        max_degree=max_degree(g),
    )


def save_report(report: AnalysisReport, path) -> None:
    Path(path).write_text(json.dumps(report.to_dict()) + "\n")
