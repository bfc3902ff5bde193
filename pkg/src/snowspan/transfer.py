"""Cross-norm transfer machinery: projections, inequality checkers, and the
experiment that judges an L2-built spanner under another Lp norm.

The inequality checkers treat their hypotheses as filters: tuples or vector
families outside the stated range are reported as such, never as failures,
so random search can count in-range trials and violations separately.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import max_stretch
from .metrics import MetricView, PointSet
from .spanners import greedy_spanner, mst

__all__ = [
    "Decomposition",
    "ScalarCheck",
    "VectorCheck",
    "TransferReport",
    "decompose",
    "dprime",
    "check_scalar_lemma",
    "check_vector_lemma",
    "transfer_experiment",
    "scalar_lemma_trials",
    "vector_lemma_trials",
    "decompose_trials",
    "save_transfer_report",
]


@dataclass(frozen=True)
class Decomposition:
    """v split into a component along w and one orthogonal to it."""

    parallel: np.ndarray
    perpendicular: np.ndarray
    reference: np.ndarray


def decompose(v, w) -> Decomposition:
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    ww = float(w @ w)
    if ww == 0.0:
        raise ValueError("reference vector must be nonzero")
    par = (float(v @ w) / ww) * w
    return Decomposition(parallel=par, perpendicular=v - par, reference=w)


def dprime(d: int, p) -> float:
    """Norm-conversion factor max(d^(1/2 - 1/p), d^(1/p - 1/2)); p=inf -> d^(1/2)."""
    if d < 1:
        raise ValueError("dimension must be a positive integer")
    if p != math.inf and p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {p}")
    inv_p = 0.0 if p == math.inf else 1.0 / p
    return float(d) ** abs(0.5 - inv_p)


@dataclass(frozen=True)
class ScalarCheck:
    status: str  # "ok" | "violated" | "hypothesis_not_satisfied"
    margin: float


def check_scalar_lemma(eps0, eps, eps1, a, b) -> ScalarCheck:
    """Given eps1*a + eps0*b <= eps*(a+b) with 0 <= eps0 <= eps <= eps1,
    eps <= 1/4 and a, b >= 0, conclude eps1*a + sqrt(eps0)*b <= sqrt(eps)*(a+b)."""
    in_range = (
        0.0 <= eps0 <= eps <= eps1
        and eps <= 0.25
        and a >= 0.0
        and b >= 0.0
        and eps1 * a + eps0 * b <= eps * (a + b)
    )
    if not in_range:
        return ScalarCheck("hypothesis_not_satisfied", math.nan)
    margin = math.sqrt(eps) * (a + b) - (eps1 * a + math.sqrt(eps0) * b)
    return ScalarCheck("ok" if margin >= 0.0 else "violated", margin)


@dataclass(frozen=True)
class VectorCheck:
    status: str  # "ok" | "violated" | "out_of_range"
    eps: float
    parallel_margin: float
    perpendicular_margin: float


def check_vector_lemma(V, w) -> VectorCheck:
    """Checks the two conclusions for a vector family V against reference w.

    eps is defined from the instance as sum ||v||_2 / ||sum v_par||_2 - 1;
    for 0 <= eps <= 1/4 the conclusions are
        sum ||v_par||_2 <= (1 + eps) ||sum v_par||_2
        sum ||v_perp||_2 <= 3 (1 + eps) sqrt(eps) ||sum v_par||_2.
    """
    decs = [decompose(v, w) for v in V]
    s_par = np.sum([d.parallel for d in decs], axis=0)
    norm_s = float(np.linalg.norm(s_par))
    if norm_s == 0.0:
        raise ValueError("the summed parallel component is zero")
    sum_norms = math.fsum(float(np.linalg.norm(np.asarray(v, dtype=float))) for v in V)
    eps = sum_norms / norm_s - 1.0
    if not 0.0 <= eps <= 0.25:
        return VectorCheck("out_of_range", eps, math.nan, math.nan)
    sum_par = math.fsum(float(np.linalg.norm(d.parallel)) for d in decs)
    sum_perp = math.fsum(float(np.linalg.norm(d.perpendicular)) for d in decs)
    m1 = (1.0 + eps) * norm_s - sum_par
    m2 = 3.0 * (1.0 + eps) * math.sqrt(eps) * norm_s - sum_perp
    status = "ok" if m1 >= 0.0 and m2 >= 0.0 else "violated"
    return VectorCheck(status, eps, m1, m2)


@dataclass(frozen=True)
class TransferReport:
    """How an L2-built greedy spanner fares under another norm."""

    p: float
    t: float
    d_prime: float
    epsilon_l2: float  # measured L2 stretch minus 1
    stretch_p: float
    bound_p: float  # (1+eps)(1 + 3 d' sqrt(eps)) with eps = t - 1
    c: float  # w2(E) / w2(MST_2)
    weight_ratio_p: float  # wp(E) / wp(MST_p)
    weight_bound: float  # c * d'
    stretch_ok: bool
    weight_ok: bool
    edge_count: int

    @property
    def ok(self) -> bool:
        return self.stretch_ok and self.weight_ok

    def to_dict(self) -> dict:
        return {
            "p": "inf" if self.p == math.inf else self.p,
            "t": self.t,
            "d_prime": self.d_prime,
            "epsilon_l2": self.epsilon_l2,
            "stretch_p": self.stretch_p,
            "bound_p": self.bound_p,
            "c": self.c,
            "weight_ratio_p": self.weight_ratio_p,
            "weight_bound": self.weight_bound,
            "stretch_ok": self.stretch_ok,
            "weight_ok": self.weight_ok,
            "edge_count": self.edge_count,
        }


def transfer_experiment(points: PointSet, t: float, p) -> TransferReport:
    """Build a greedy t-spanner under L2, then measure it under Lp.

    The stretch bound uses eps = t - 1 (the construction guarantee); the
    weight bound chains through c = w2(E)/w2(MST_2) and the norm-conversion
    factor d'. Both measured values are compared against their bounds.
    """
    if points.n < 2:
        raise ValueError("transfer experiment needs at least two points")
    if not points.is_coordinate:
        raise ValueError("transfer experiment needs coordinate points")
    eps = t - 1.0
    l2 = MetricView.lp(points, 2)
    lp = MetricView.lp(points, p)
    g = greedy_spanner(points, l2, t)

    stretch_2, _ = max_stretch(g, l2)
    stretch_p, _ = max_stretch(g, lp)
    dp = dprime(points.dim, p)
    bound_p = (1.0 + eps) * (1.0 + 3.0 * dp * math.sqrt(eps))

    w2_e = math.fsum(g.reweighted(l2))
    w2_mst2 = math.fsum(mst(points, l2).ws)
    wp_e = math.fsum(g.reweighted(lp))
    wp_mstp = math.fsum(mst(points, lp).ws)
    c = w2_e / w2_mst2
    ratio_p = wp_e / wp_mstp
    return TransferReport(
        p=p,
        t=t,
        d_prime=dp,
        epsilon_l2=stretch_2 - 1.0,
        stretch_p=stretch_p,
        bound_p=bound_p,
        c=c,
        weight_ratio_p=ratio_p,
        weight_bound=c * dp,
        stretch_ok=stretch_p <= bound_p,
        weight_ok=ratio_p <= c * dp,
        edge_count=g.m,
    )


def scalar_lemma_trials(trials: int, seed: int):
    """Random in-range tuples for the scalar inequality; returns
    (in_range_count, violations) where violations lists offending tuples."""
    rng = np.random.default_rng(seed)
    eps = rng.uniform(1e-6, 0.25, trials)
    eps0 = eps * rng.uniform(0.0, 1.0, trials)
    a = rng.exponential(1.0, trials) * (rng.random(trials) > 0.05)  # some a = 0
    b = rng.exponential(1.0, trials) * (rng.random(trials) > 0.05)
    # largest eps1 the hypothesis allows for this draw, then back off randomly
    with np.errstate(divide="ignore", invalid="ignore"):
        cap = np.where(a > 0, (eps * (a + b) - eps0 * b) / a, eps + 10.0)
    eps1 = eps + rng.uniform(0.0, 1.0, trials) * np.maximum(cap - eps, 0.0)
    in_range = 0
    violations = []
    for i in range(trials):
        res = check_scalar_lemma(eps0[i], eps[i], eps1[i], a[i], b[i])
        if res.status == "hypothesis_not_satisfied":
            continue
        in_range += 1
        if res.status == "violated":
            violations.append(
                {"eps0": eps0[i], "eps": eps[i], "eps1": eps1[i], "a": a[i], "b": b[i],
                 "margin": res.margin}
            )
    return in_range, violations


def vector_lemma_trials(trials: int, seed: int, dim: int = 3):
    """Random near-parallel vector families; returns (in_range, violations)."""
    rng = np.random.default_rng(seed)
    in_range = 0
    violations = []
    for _ in range(trials):
        m = int(rng.integers(2, 7))
        w = rng.normal(size=dim)
        w_hat = w / np.linalg.norm(w)
        scale = rng.uniform(0.5, 2.0, m)
        perp = rng.normal(size=(m, dim))
        perp -= np.outer(perp @ w_hat, w_hat)
        norms = np.linalg.norm(perp, axis=1)
        norms[norms == 0.0] = 1.0
        rho = rng.uniform(0.01, 0.4, m) * scale
        V = scale[:, None] * w_hat + (rho / norms)[:, None] * perp
        res = check_vector_lemma(V, w)
        if res.status == "out_of_range":
            continue
        in_range += 1
        if res.status == "violated":
            violations.append({"V": V.tolist(), "w": w.tolist(), "eps": res.eps})
    return in_range, violations


def decompose_trials(trials: int, seed: int, dim: int = 5):
    """Reconstruction and orthogonality margins over random (v, w) pairs.

    Returns (max reconstruction error, max normalized inner product).
    """
    rng = np.random.default_rng(seed)
    worst_recon = 0.0
    worst_ortho = 0.0
    for _ in range(trials):
        v = rng.normal(size=dim)
        w = rng.normal(size=dim)
        dec = decompose(v, w)
        recon = float(np.linalg.norm(dec.parallel + dec.perpendicular - v))
        denom = float(np.linalg.norm(v) * np.linalg.norm(w))
        ortho = abs(float(dec.perpendicular @ w)) / denom if denom else 0.0
        worst_recon = max(worst_recon, recon)
        worst_ortho = max(worst_ortho, ortho)
    return worst_recon, worst_ortho


def save_transfer_report(report: TransferReport, path) -> None:
    Path(path).write_text(json.dumps(report.to_dict()) + "\n")
