"""Net-tree and greedy spanners, measured exactly.

The net-tree spanner joins i-level net points within gamma * 2^i and keeps
parent links, giving O(log n) hop routes; the path-greedy spanner is the
classic light baseline whose stretch holds by construction. Everything is
measured with exact all-pairs shortest paths.
"""

from snowspan import (
    analyze,
    build_hierarchy,
    gamma_for_epsilon,
    greedy_spanner,
    mst,
    net_tree_spanner,
    parse_metric,
)
from snowspan.datasets import gen_grid, gen_uniform

pts = gen_grid(257)
metric = parse_metric("snowflake:l2:0.75", pts)
h = build_hierarchy(pts, metric)

print("net-tree spanner on the 257-grid, alpha = 0.75 (diameter 64):")
print(f"{'gamma':>6} {'edges':>7} {'stretch':>9} {'hops':>5} {'lightness':>10}")
for gamma in (2.0, 4.0, 8.0, 16.0, 32.0):
    g = net_tree_spanner(h, metric, gamma)
    rep = analyze(g, pts, metric)
    print(
        f"{gamma:>6.0f} {rep.edge_count:>7} {rep.max_stretch:>9.5f} "
        f"{rep.hop_diameter:>5} {rep.lightness:>10.3f}"
    )
print(f"(hop bound from parent chains: 2 * {h.ell} + 2 = {2 * h.ell + 2})")

eps = 0.25
print(f"\ndefault gamma for eps={eps}: {gamma_for_epsilon(eps)}")

cloud = gen_uniform(256, 2, seed=11)
l2 = parse_metric("l2", cloud)
print("\ngreedy spanner on 256 uniform 2-D points (plain l2):")
print(f"{'t':>5} {'edges':>7} {'stretch':>9} {'lightness':>10}")
for t in (1.1, 1.25, 1.5, 2.0):
    g = greedy_spanner(cloud, l2, t)
    rep = analyze(g, cloud, l2)
    print(f"{t:>5.2f} {rep.edge_count:>7} {rep.max_stretch:>9.5f} {rep.lightness:>10.3f}")

tree = mst(cloud, l2)
print(f"\nMST: {tree.m} edges, weight {tree.total_weight():.3f} (lightness 1 by definition)")
