"""Hierarchical nets and the sum-of-radii statistic.

Level i is a 2^i-net of level i-1: a maximal set of points pairwise more
than 2^i apart that still covers the level below within 2^i. The sum of
net-point radii |N_i| * 2^i drives the net-tree spanner's weight, and the
contrast between plain and snowflaked grids is the whole story: plain
grids accumulate a constant per level (log n total), snowflaked grids
decay geometrically (constant total).
"""

from snowspan import build_hierarchy, estimate_ddim, parse_metric, sum_of_radii, verify_hierarchy
from snowspan.datasets import gen_grid

n = 257
grid = gen_grid(n)

for spec in ("l2", "snowflake:l2:0.5"):
    metric = parse_metric(spec, grid)
    h = build_hierarchy(grid, metric)
    radii = sum_of_radii(h)
    print(f"\n{spec} on the {n}-point grid: ell = {h.ell}")
    for i, count, r in radii.per_level:
        print(f"  level {i}: |N_i| = {count:>4}, radii {r:>7.1f}")
    print(f"  total radii {radii.total:.1f}  (MST weight {n - 1}: unit steps either way)")
    print(f"  invariants hold: {verify_hierarchy(h, metric).ok}")
    print(f"  doubling-dimension witness: {estimate_ddim(h, metric):.3f}")

# the radii/MST ratio across sizes: flat when snowflaked, growing when not
print("\nradii / MST-weight ratio by n:")
print(f"{'n':>6} {'snowflaked':>11} {'plain':>8}")
for k in (6, 8, 10, 12):
    n = 2**k + 1
    grid = gen_grid(n)
    row = []
    for spec in ("snowflake:l2:0.5", "l2"):
        metric = parse_metric(spec, grid)
        h = build_hierarchy(grid, metric)
        row.append(sum_of_radii(h).total / (n - 1))
    print(f"{n:>6} {row[0]:>11.4f} {row[1]:>8.4f}")
