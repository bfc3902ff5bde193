"""Dataset generators: integer grids, uniform cubes, clustered blobs.

Randomized kinds require a seed and are rescaled so the minimum pairwise
L2 distance is 1; grids are exact integers and already unit-spaced.
"""

from __future__ import annotations

import numpy as np

from .metrics import MetricView, PointSet, rescale_to_unit_min

__all__ = ["gen", "gen_grid", "gen_uniform", "gen_clustered", "KINDS"]

KINDS = ("grid", "uniform", "clustered")


def gen_grid(n: int) -> PointSet:
    """1-D grid with coordinates 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return PointSet(coords=np.arange(1, n + 1, dtype=float)[:, None])


def _rescaled(points: PointSet) -> PointSet:
    if points.n < 2:
        return points
    return rescale_to_unit_min(points, MetricView.lp(points, 2))


def gen_uniform(n: int, dim: int, seed: int) -> PointSet:
    """n points uniform in [0, n^(1/dim)]^dim, rescaled to unit min distance."""
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be >= 1")
    rng = np.random.default_rng(seed)
    side = float(n) ** (1.0 / dim)
    return _rescaled(PointSet(coords=rng.uniform(0.0, side, size=(n, dim))))


def gen_clustered(n: int, dim: int, seed: int, clusters: int | None = None) -> PointSet:
    """Gaussian blobs around seeded centers, rescaled to unit min distance."""
    if n < 1 or dim < 1:
        raise ValueError("n and dim must be >= 1")
    rng = np.random.default_rng(seed)
    k = clusters if clusters else max(2, round(float(n) ** 0.5 / 2))
    side = float(n) ** (1.0 / dim)
    centers = rng.uniform(0.0, 4.0 * side, size=(k, dim))
    assign = rng.integers(0, k, size=n)
    coords = centers[assign] + rng.normal(0.0, side / 4.0, size=(n, dim))
    return _rescaled(PointSet(coords=coords))


def gen(kind: str, n: int, dim: int = 1, seed: int | None = None) -> PointSet:
    if kind == "grid":
        return gen_grid(n)
    if kind in ("uniform", "clustered"):
        if seed is None:
            raise ValueError(f"kind {kind!r} requires a seed")
        return gen_uniform(n, dim, seed) if kind == "uniform" else gen_clustered(n, dim, seed)
    raise ValueError(f"unknown dataset kind: {kind!r} (expected one of {KINDS})")
