"""Point sets, Lp and matrix metrics, and the snowflake transform.

Everything downstream (nets, spanners, charging ledgers) pulls distances
from a :class:`MetricView`, so this module is the single source of truth
for both the base distance function and its snowflaked variant.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "PointSet",
    "MetricView",
    "MetricSummary",
    "lp_distance",
    "snowflake_distance",
    "summarize",
    "rescale_to_unit_min",
    "hierarchy_level_count",
    "parse_metric",
    "TRIANGLE_RTOL",
    "MIN_DISTANCE_RTOL",
]

# Matrix metrics must satisfy the triangle inequality up to this relative slack.
TRIANGLE_RTOL = 1e-9
# Net/ledger operations require min pairwise distance >= 1 - MIN_DISTANCE_RTOL.
MIN_DISTANCE_RTOL = 1e-9

# Row-block size (in matrix cells) for pairwise distance computation.
_BLOCK_CELLS = 1 << 22


class PointSet:
    """n points given as coordinate vectors or as an explicit distance matrix.

    Instances are immutable: the backing arrays are marked read-only.
    """

    def __init__(self, coords=None, matrix=None):
        if (coords is None) == (matrix is None):
            raise ValueError("provide exactly one of coords or matrix")
        if coords is not None:
            arr = np.asarray(coords, dtype=float)
            if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
                raise ValueError("coords must be a non-empty n x dim array")
            if not np.all(np.isfinite(arr)):
                raise ValueError("coordinates must be finite")
            self.coords = arr
            self.matrix = None
        else:
            m = np.asarray(matrix, dtype=float)
            _validate_matrix_metric(m)
            self.coords = None
            self.matrix = m
        for a in (self.coords, self.matrix):
            if a is not None:
                a.setflags(write=False)

    @property
    def n(self) -> int:
        return self.coords.shape[0] if self.coords is not None else self.matrix.shape[0]

    @property
    def dim(self) -> int:
        if self.coords is None:
            raise ValueError("matrix-backed point set has no coordinate dimension")
        return self.coords.shape[1]

    @property
    def is_coordinate(self) -> bool:
        return self.coords is not None

    @classmethod
    def from_coords(cls, coords) -> "PointSet":
        return cls(coords=coords)

    @classmethod
    def from_matrix(cls, matrix) -> "PointSet":
        return cls(matrix=matrix)

    @classmethod
    def load(cls, path) -> "PointSet":
        data = json.loads(Path(path).read_text())
        if "coords" in data:
            coords = np.asarray(data["coords"], dtype=float)
            if "dim" in data and coords.shape[1] != data["dim"]:
                raise ValueError("point file dim field disagrees with coords")
            return cls(coords=coords)
        if "matrix" in data:
            return cls(matrix=data["matrix"])
        raise ValueError("point file must contain 'coords' or 'matrix'")

    def save(self, path) -> None:
        if self.is_coordinate:
            payload = {"dim": self.dim, "coords": [list(row) for row in self.coords.tolist()]}
        else:
            payload = {"matrix": [list(row) for row in self.matrix.tolist()]}
        Path(path).write_text(json.dumps(payload) + "\n")


def _validate_matrix_metric(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError("matrix must be square and non-empty")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    if np.any(m < 0):
        raise ValueError("matrix entries must be nonnegative")
    if np.any(np.diag(m) != 0.0):
        raise ValueError("matrix diagonal must be zero")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix must be symmetric")
    n = m.shape[0]
    # d(i,j) <= d(i,k) + d(k,j), allowing relative slack on the right side.
    for k in range(n):
        through_k = m[:, k, None] + m[None, k, :]
        bad = m > through_k * (1.0 + TRIANGLE_RTOL)
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise ValueError(
                f"triangle inequality violated: d({i},{j})={m[i, j]} > "
                f"d({i},{k})+d({k},{j})={through_k[i, j]}"
            )


def lp_distance(u, v, p) -> float:
    """||u - v||_p for two equal-dimension vectors; p may be math.inf."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if p != math.inf and p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    return _lp_reduce(np.abs(u - v), p)


def _lp_reduce(absdiff: np.ndarray, p) -> float:
    # Reduction over the last axis; shared by single-pair and pairwise paths
    # so both produce bit-identical values.
    if p == math.inf:
        return absdiff.max(axis=-1)
    if p == 2:
        return np.sqrt((absdiff * absdiff).sum(axis=-1))
    if p == 1:
        return absdiff.sum(axis=-1)
    return (absdiff**p).sum(axis=-1) ** (1.0 / p)


def snowflake_distance(base_distance: float, alpha: float) -> float:
    """base_distance ** alpha, the alpha-snowflake of a single distance."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if base_distance < 0:
        raise ValueError("base distance must be nonnegative")
    return base_distance**alpha


class MetricView:
    """A distance oracle over a :class:`PointSet`, tagged with its kind.

    Kinds: ``lp`` (coordinate points under an Lp norm), ``matrix`` (explicit
    distance matrix), and ``snowflake`` (a base view with every distance
    raised to ``alpha`` in a single exponentiation).
    """

    def __init__(self, kind: str, points: PointSet, p=None, alpha=None, base=None):
        self.kind = kind
        self.points = points
        self.p = p
        self.alpha = alpha
        self.base = base
        self._pairwise = None

    @classmethod
    def lp(cls, points: PointSet, p) -> "MetricView":
        if not points.is_coordinate:
            raise ValueError("Lp view requires coordinate points")
        if p != math.inf and p < 1:
            raise ValueError(f"p must be >= 1 or inf, got {p}")
        return cls("lp", points, p=p)

    @classmethod
    def matrix(cls, points: PointSet) -> "MetricView":
        if points.is_coordinate:
            raise ValueError("matrix view requires matrix-backed points")
        return cls("matrix", points)

    @classmethod
    def snowflake(cls, base: "MetricView", alpha: float) -> "MetricView":
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        return cls("snowflake", base.points, alpha=alpha, base=base)

    @property
    def n(self) -> int:
        return self.points.n

    @property
    def spec(self) -> str:
        """Canonical metric spec string for this view."""
        if self.kind == "matrix":
            return "matrix"
        if self.kind == "lp":
            if self.p == math.inf:
                return "linf"
            if self.p == int(self.p):
                return f"l{int(self.p)}" if self.p in (1, 2) else f"lp:{int(self.p)}"
            return f"lp:{self.p}"
        return f"snowflake:{self.base.spec}:{self.alpha}"

    def distance(self, i: int, j: int) -> float:
        if self.kind == "snowflake":
            return self.base.distance(i, j) ** self.alpha
        if self.kind == "matrix":
            return float(self.points.matrix[i, j])
        absdiff = np.abs(self.points.coords[i] - self.points.coords[j])
        return float(_lp_reduce(absdiff, self.p))

    def pairwise(self) -> np.ndarray:
        """Full n x n distance matrix (cached, read-only)."""
        if self._pairwise is None:
            if self.kind == "snowflake":
                mat = self.base.pairwise() ** self.alpha
            elif self.kind == "matrix":
                mat = self.points.matrix.copy()
            else:
                mat = _lp_pairwise(self.points.coords, self.p)
            mat.setflags(write=False)
            self._pairwise = mat
        return self._pairwise

    def edge_weights(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        """Distances for index arrays us, vs (used to reweigh edge sets)."""
        if self.kind == "snowflake":
            return self.base.edge_weights(us, vs) ** self.alpha
        if self.kind == "matrix":
            return self.points.matrix[us, vs].astype(float)
        absdiff = np.abs(self.points.coords[us] - self.points.coords[vs])
        return np.asarray(_lp_reduce(absdiff, self.p), dtype=float)


def _lp_pairwise(coords: np.ndarray, p) -> np.ndarray:
    n = coords.shape[0]
    out = np.empty((n, n), dtype=float)
    step = max(1, _BLOCK_CELLS // max(1, n * coords.shape[1]))
    for lo in range(0, n, step):
        hi = min(n, lo + step)
        absdiff = np.abs(coords[lo:hi, None, :] - coords[None, :, :])
        out[lo:hi] = _lp_reduce(absdiff, p)
    return out


def parse_metric(spec: str, points: PointSet) -> MetricView:
    """Build a MetricView from a spec string.

    Accepted forms: ``l1``, ``l2``, ``linf``, ``lp:<p>``, ``matrix``, and
    ``snowflake:<base-spec>:<alpha>`` (alpha is the final colon field).
    """
    s = spec.strip()
    if s == "matrix":
        return MetricView.matrix(points)
    if s in ("l1", "l2"):
        return MetricView.lp(points, float(s[1:]))
    if s == "linf":
        return MetricView.lp(points, math.inf)
    if s.startswith("lp:"):
        body = s[3:]
        p = math.inf if body in ("inf", "linf") else float(body)
        return MetricView.lp(points, p)
    if s.startswith("snowflake:"):
        body, _, alpha_str = s[len("snowflake:"):].rpartition(":")
        if not body:
            raise ValueError(f"malformed snowflake spec: {spec!r}")
        return MetricView.snowflake(parse_metric(body, points), float(alpha_str))
    raise ValueError(f"unknown metric spec: {spec!r}")


@dataclass(frozen=True)
class MetricSummary:
    """Diameter, minimum pairwise distance, and ell = ceil(log2(diameter))."""

    diameter: float
    min_distance: float
    ell: int


def summarize(points: PointSet, metric: MetricView) -> MetricSummary:
    """Exact diameter / min distance over all pairs; ell floors at zero."""
    n = points.n
    if n == 1:
        return MetricSummary(0.0, 0.0, 0)
    d = metric.pairwise()
    iu = np.triu_indices(n, k=1)
    vals = d[iu]
    diameter = float(vals.max())
    min_distance = float(vals.min())
    ell = max(0, math.ceil(math.log2(diameter))) if diameter > 0 else 0
    return MetricSummary(diameter, min_distance, ell)


def hierarchy_level_count(n: int, diameter: float) -> int:
    """Top net level for hierarchy and pivot constructions.

    ceil(log2(diameter)), floored at 1 for n >= 2 so the top-level net is
    always a singleton (the floor only matters when the diameter is exactly
    the minimum distance 1).
    """
    if n <= 1:
        return 0
    return max(1, math.ceil(math.log2(diameter)))


def rescale_to_unit_min(points: PointSet, metric: MetricView) -> PointSet:
    """Scaled copy whose min pairwise distance under `metric` is 1.

    Coordinate points are divided by the innermost base view's min distance
    (which also normalizes any snowflake wrapper, since 1**alpha == 1);
    matrix entries are divided directly.
    """
    if points.n < 2:
        raise ValueError("rescaling needs at least two points")
    base = metric
    while base.kind == "snowflake":
        base = base.base
    d = base.pairwise()
    iu = np.triu_indices(points.n, k=1)
    flat = np.argmin(d[iu])
    scale = float(d[iu][flat])
    if scale == 0.0:
        u, v = iu[0][flat], iu[1][flat]
        raise ValueError(f"duplicate points: indices {u} and {v} coincide")
    if points.is_coordinate:
        return PointSet(coords=points.coords / scale)
    return PointSet(matrix=points.matrix / scale)


def require_unit_min(summary_or_min) -> None:
    """Guard for net/ledger preconditions: min distance >= 1 (rel. slack)."""
    m = summary_or_min.min_distance if isinstance(summary_or_min, MetricSummary) else summary_or_min
    if m < 1.0 - MIN_DISTANCE_RTOL:
        raise ValueError(
            f"minimum inter-point distance is {m}, below 1; "
            "rescale with rescale_to_unit_min first"
        )
