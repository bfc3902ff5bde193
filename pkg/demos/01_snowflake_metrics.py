"""Points, metric views, and the snowflake transform.

The snowflake of a metric raises every distance to a power alpha in (0, 1).
This demo builds the 17-point unit grid, snowflakes it with alpha = 1/2,
and shows the basic summary statistics everything else builds on.
"""

import numpy as np

from snowspan import MetricView, PointSet, parse_metric, rescale_to_unit_min, summarize
from snowspan.datasets import gen_grid, gen_uniform

# a 1-D grid with coordinates 1..17
grid = gen_grid(17)
plain = parse_metric("l2", grid)
snow = parse_metric("snowflake:l2:0.5", grid)

print("plain distance v1 -> v17:", plain.distance(0, 16))
print("snowflake distance v1 -> v17:", snow.distance(0, 16))  # sqrt(16) = 4

s_plain = summarize(grid, plain)
s_snow = summarize(grid, snow)
print(f"plain:     diameter {s_plain.diameter}, levels ell = {s_plain.ell}")
print(f"snowflake: diameter {s_snow.diameter}, levels ell = {s_snow.ell}")

# snowflaking compresses long distances much more than short ones
for d in (1, 4, 16, 64, 256):
    print(f"  base {d:>4} -> snowflaked {d ** 0.5:>5.1f}")

# random clouds are rescaled so the minimum pairwise distance is 1,
# matching the normalization every construction here assumes
cloud = gen_uniform(200, 2, seed=42)
s = summarize(cloud, MetricView.lp(cloud, 2))
print(f"uniform cloud: n=200, min distance {s.min_distance:.12f}, diameter {s.diameter:.2f}")

# the same normalization works for arbitrary coordinate sets
raw = PointSet.from_coords(np.random.default_rng(0).uniform(0, 50, size=(64, 3)))
scaled = rescale_to_unit_min(raw, MetricView.lp(raw, 2))
print("rescaled min distance:", summarize(scaled, MetricView.lp(scaled, 2)).min_distance)
