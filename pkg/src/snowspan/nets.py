"""Greedy hierarchical nets: nested 2^i-nets with parent links.

Level 0 is the point set itself; every higher level is a 2^i-net of the
level below it, built by an index-order greedy scan so the construction is
deterministic and reproducible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import MetricView, PointSet, hierarchy_level_count, require_unit_min, summarize

__all__ = [
    "NetHierarchy",
    "HierarchyReport",
    "RadiiReport",
    "build_hierarchy",
    "verify_hierarchy",
    "sum_of_radii",
    "estimate_ddim",
    "save_hierarchy",
    "load_hierarchy",
]


@dataclass
class NetHierarchy:
    """Nets N_0 .. N_ell (index arrays, ascending) plus per-level parent maps.

    ``parents[i][p]`` is the nearest level-(i+1) net point covering p, for
    each p in N_i and i < ell; distance to it is at most 2^(i+1).
    """

    levels: list
    parents: list
    ell: int

    def parent(self, p: int, i: int) -> int:
        return self.parents[i][p]

    @property
    def n(self) -> int:
        return len(self.levels[0])


@dataclass(frozen=True)
class HierarchyReport:
    ok: bool
    violations: list

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None


@dataclass(frozen=True)
class RadiiReport:
    """Per-level (i, |N_i|, |N_i| * 2^i) for i < ell, and their sum."""

    per_level: list
    total: float


def build_hierarchy(points: PointSet, metric: MetricView) -> NetHierarchy:
    """Greedy nested nets over `metric`.

    N_i scans N_{i-1} in ascending point-index order and admits a point iff
    it is strictly more than 2^i from everything already admitted at level i.
    Parents are the nearest net point one level up, ties to the lowest index.
    Requires min pairwise distance >= 1.
    """
    n = points.n
    if n == 1:
        return NetHierarchy(levels=[np.array([0])], parents=[], ell=0)
    summary = summarize(points, metric)
    require_unit_min(summary)
    ell = hierarchy_level_count(n, summary.diameter)
    d = metric.pairwise()

    levels = [np.arange(n)]
    for i in range(1, ell + 1):
        prev = levels[-1]
        thr = 2.0**i
        min_dist = np.full(prev.size, np.inf)
        admitted = []
        for pos in range(prev.size):
            p = prev[pos]
            if min_dist[pos] > thr:
                admitted.append(p)
                np.minimum(min_dist, d[p, prev], out=min_dist)
        levels.append(np.array(admitted))

    parents = []
    for i in range(ell):
        upper = levels[i + 1]
        level_parents = {}
        for p in levels[i]:
            level_parents[int(p)] = int(upper[np.argmin(d[p, upper])])
        parents.append(level_parents)
    return NetHierarchy(levels=levels, parents=parents, ell=ell)


def verify_hierarchy(h: NetHierarchy, metric: MetricView) -> HierarchyReport:
    """Exhaustive packing / cover / nesting / parent-distance check."""
    v = []
    d = metric.pairwise()
    n = h.n
    if not np.array_equal(h.levels[0], np.arange(n)):
        v.append("level 0 is not the full point set")
    if len(h.levels) != h.ell + 1:
        v.append(f"expected {h.ell + 1} levels, found {len(h.levels)}")
    if h.ell >= 1 and len(h.levels[-1]) != 1:
        v.append(f"top level has {len(h.levels[-1])} points, expected a singleton")

    for i in range(1, min(len(h.levels), h.ell + 1)):
        net = h.levels[i]
        prev = h.levels[i - 1]
        thr = 2.0**i
        if not set(net.tolist()) <= set(prev.tolist()):
            v.append(f"level {i} is not nested in level {i - 1}")
            continue
        if net.size > 1:
            sub = d[np.ix_(net, net)]
            close = np.triu(sub <= thr, k=1)
            if np.any(close):
                a, b = np.argwhere(close)[0]
                v.append(
                    f"packing violation at level {i}: points {net[a]} and {net[b]} "
                    f"at distance {sub[a, b]} <= {thr}"
                )
        gap = d[np.ix_(prev, net)].min(axis=1)
        uncovered = np.nonzero(gap > thr)[0]
        if uncovered.size:
            p = prev[uncovered[0]]
            v.append(
                f"cover violation at level {i}: point {p} at distance "
                f"{gap[uncovered[0]]} > {thr} from every net point"
            )

    for i, level_parents in enumerate(h.parents):
        members = set(h.levels[i].tolist())
        upper = set(h.levels[i + 1].tolist())
        if set(level_parents) != members:
            v.append(f"parent map at level {i} does not cover N_{i}")
        for p, q in level_parents.items():
            if q not in upper:
                v.append(f"parent of ({p},{i}) is {q}, not a level-{i + 1} net point")
            elif d[p, q] > 2.0 ** (i + 1):
                v.append(
                    f"parent of ({p},{i}) is {q} at distance {d[p, q]} > {2.0 ** (i + 1)}"
                )
    return HierarchyReport(ok=not v, violations=v)


def sum_of_radii(h: NetHierarchy) -> RadiiReport:
    """Sum of net-point radii |N_i| * 2^i over levels i < ell."""
    per_level = [(i, len(h.levels[i]), len(h.levels[i]) * 2.0**i) for i in range(h.ell)]
    return RadiiReport(per_level=per_level, total=float(sum(r for _, _, r in per_level)))


def estimate_ddim(h: NetHierarchy, metric: MetricView) -> float:
    """Doubling-dimension lower-bound witness from net-point ball counts.

    A level-i net is a 2^i-packing, so a ball of radius 2^(i+2) around any
    point holds at most (2^(i+2) / 2^i)^(2 ddim) = 2^(4 ddim) of its points;
    inverting gives ddim >= log2(count) / 4 for every (level, point).
    """
    if h.n < 2:
        raise ValueError("doubling-dimension estimate needs at least two points")
    d = metric.pairwise()
    best = 0.0
    for i, net in enumerate(h.levels):
        radius = 2.0 ** (i + 2)
        counts = (d[np.ix_(net, net)] <= radius).sum(axis=1)
        best = max(best, math.log2(int(counts.max())) / 4.0)
    return best


def save_hierarchy(h: NetHierarchy, path) -> None:
    payload = {
        "ell": h.ell,
        "levels": [lvl.tolist() for lvl in h.levels],
        "parents": [
            [int(p), i, int(q)] for i, lp in enumerate(h.parents) for p, q in sorted(lp.items())
        ],
    }
    Path(path).write_text(json.dumps(payload) + "\n")


def load_hierarchy(path) -> NetHierarchy:
    data = json.loads(Path(path).read_text())
    levels = [np.array(lvl, dtype=int) for lvl in data["levels"]]
    parents = [dict() for _ in range(data["ell"])]
    for p, i, q in data["parents"]:
        parents[i][int(p)] = int(q)
    return NetHierarchy(levels=levels, parents=parents, ell=data["ell"])
