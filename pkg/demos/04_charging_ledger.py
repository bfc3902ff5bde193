"""The charging ledger: why snowflaked net radii are bounded by the MST.

Walk a Hamiltonian path, pick per-level pivots spaced at least 2^(i-1)
apart in snowflake distance, join consecutive pivots into per-level paths,
and charge those paths' weight back onto the Hamiltonian path edges
proportionally to base-metric length. The grid special case reproduces the
closed-form numbers exactly; the general construction certifies, per
instance, that the radii sum is within explicit constants of the MST.
"""

import numpy as np

from snowspan import (
    build_auxiliary_graph,
    build_hierarchy,
    build_pivots,
    charge_constant,
    compute_loads,
    hamiltonian_path,
    parse_metric,
    verify_ledger,
)
from snowspan.datasets import gen_grid, gen_uniform

# --- the 17-point grid, closed form -------------------------------------
pts = gen_grid(17)
metric = parse_metric("snowflake:l2:0.5", pts)
path = hamiltonian_path(pts, metric)
pivots = build_pivots(path, metric, mode="grid-intuition")
aux = build_auxiliary_graph(pivots)
loads = compute_loads(aux, path, metric.base)

print("17-point grid, alpha = 1/2, stride pivots:")
print("  level-1 pivots (1-based):", (pivots.positions[1] + 1).tolist())
print(f"  auxiliary weight: 16 * 1 + 4 * 2 = {aux.total_weight}")
print(f"  load on each unit edge: 1 + 1/2 = {loads.per_edge[0]}")
print(f"  total load equals the weight: {loads.total}")

# --- the general construction, verified ----------------------------------
for label, pts, alpha in [
    ("4097-grid", gen_grid(4097), 0.5),
    ("256 uniform 2-D", gen_uniform(256, 2, seed=3), 0.5),
    ("256 uniform 2-D", gen_uniform(256, 2, seed=3), 0.25),
]:
    metric = parse_metric(f"snowflake:l2:{alpha}", pts)
    h = build_hierarchy(pts, metric)
    path = hamiltonian_path(pts, metric)
    pivots = build_pivots(path, metric)
    aux = build_auxiliary_graph(pivots)
    loads = compute_loads(aux, path, metric.base)
    report = verify_ledger(h, pivots, aux, loads, alpha)
    print(f"\n{label}, alpha = {alpha}: all checks pass = {report.ok}")
    print(f"  radii sum {report.radii_total:.1f} <= 4 * aux weight {4 * report.aux_weight:.1f}")
    print(
        f"  worst per-edge load ratio {report.max_load_ratio:.3f}"
        f" <= C({alpha}) = {charge_constant(alpha):.3f}"
    )
    print(f"  aux weight {report.aux_weight:.1f} <= C * path weight "
          f"{report.c_alpha * float(np.sum(loads.eta)):.1f}")
