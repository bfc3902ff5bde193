import math

import numpy as np
import pytest

from oracles import floyd_warshall, kruskal_mst_weight
from snowspan import (
    MetricView,
    PointSet,
    build_hierarchy,
    estimate_ddim,
    greedy_spanner,
    max_stretch,
    mst,
    net_tree_spanner,
    parse_metric,
    sum_of_radii,
)
from snowspan.datasets import gen_grid, gen_uniform
from snowspan.spanners import gamma_for_epsilon, load_graph, save_graph


class TestNetTreeSpanner:
    def test_single_point_empty(self):
        pts = PointSet.from_coords([[0.0]])
        m = MetricView.lp(pts, 2)
        g = net_tree_spanner(build_hierarchy(pts, m), m, 4.0)
        assert g.m == 0

    def test_two_points_one_edge(self):
        pts = PointSet.from_coords([[0.0], [1.0]])
        m = MetricView.lp(pts, 2)
        g = net_tree_spanner(build_hierarchy(pts, m), m, 4.0)
        assert g.m == 1
        assert g.ws[0] == 1.0

    def test_gamma_floor(self):
        pts = PointSet.from_coords([[0.0], [1.0]])
        m = MetricView.lp(pts, 2)
        with pytest.raises(ValueError, match="gamma"):
            net_tree_spanner(build_hierarchy(pts, m), m, 1.5)

    def test_theta257_gamma8_measured_stretch(self, theta257_snow):
        # frozen from the exact all-pairs oracle: pairs just past the level-0
        # reach detour through net ancestors, costing ~12.05 against 9
        pts, m = theta257_snow
        g = net_tree_spanner(build_hierarchy(pts, m), m, 8.0)
        stretch, witness = max_stretch(g, m)
        assert stretch == pytest.approx(1.3386635091154533, rel=1e-9)
        assert witness == (2, 83)

    def test_connected_and_weights_match_metric(self, theta257_snow):
        pts, m = theta257_snow
        h = build_hierarchy(pts, m)
        g = net_tree_spanner(h, m, 8.0)
        d = m.pairwise()
        assert np.all(np.abs(g.ws - d[g.us, g.vs]) <= 1e-12 * g.ws)
        # parent chains keep it connected even at the gamma floor
        g2 = net_tree_spanner(h, m, 2.0)
        stretch, _ = max_stretch(g2, m)  # raises if disconnected
        assert stretch >= 1.0

    def test_level_degree_bound(self, theta257_snow):
        # level-i cross degree stays under (2 gamma)^(2 * ddim_est * 1.5)
        pts, m = theta257_snow
        h = build_hierarchy(pts, m)
        gamma = 8.0
        g = net_tree_spanner(h, m, gamma)
        est = estimate_ddim(h, m)
        bound = (2.0 * gamma) ** (2.0 * est * 1.5)
        for i in range(h.ell):
            sel = g.levels == i
            if not np.any(sel):
                continue
            counts = np.bincount(
                np.concatenate([g.us[sel], g.vs[sel]]), minlength=g.n
            )
            assert counts.max() <= bound

    def test_total_weight_vs_radii(self, theta257_snow):
        # spanner weight <= radii sum * max level degree * gamma
        pts, m = theta257_snow
        h = build_hierarchy(pts, m)
        gamma = 8.0
        g = net_tree_spanner(h, m, gamma)
        maxdeg = 0
        for i in range(h.ell):
            sel = g.levels == i
            if np.any(sel):
                counts = np.bincount(
                    np.concatenate([g.us[sel], g.vs[sel]]), minlength=g.n
                )
                maxdeg = max(maxdeg, int(counts.max()))
        assert g.total_weight() <= sum_of_radii(h).total * maxdeg * gamma

    def test_gamma_for_epsilon(self):
        assert gamma_for_epsilon(0.25) == 32.0
        assert gamma_for_epsilon(100.0) == 2.0
        with pytest.raises(ValueError):
            gamma_for_epsilon(0.0)


class TestGreedySpanner:
    def test_three_collinear(self):
        pts = PointSet.from_coords([[0.0], [1.0], [2.0]])
        g = greedy_spanner(pts, MetricView.lp(pts, 2), 1.1)
        assert list(zip(g.us.tolist(), g.vs.tolist())) == [(0, 1), (1, 2)]

    def test_t_guard(self):
        pts = PointSet.from_coords([[0.0], [1.0]])
        with pytest.raises(ValueError, match="exceed 1"):
            greedy_spanner(pts, MetricView.lp(pts, 2), 1.0)

    def test_stretch_bounded_by_construction(self, uniform128):
        pts, m = uniform128
        g = greedy_spanner(pts, m, 1.25)
        stretch, _ = max_stretch(g, m)
        assert stretch <= 1.25

    def test_all_pairs_verification_midsize(self):
        pts = gen_uniform(256, 2, seed=21)
        m = MetricView.lp(pts, 2)
        g = greedy_spanner(pts, m, 1.5)
        stretch, _ = max_stretch(g, m)
        assert stretch <= 1.5

    def test_matches_floyd_warshall_oracle(self):
        pts = gen_uniform(40, 2, seed=3)
        m = MetricView.lp(pts, 2)
        g = greedy_spanner(pts, m, 1.2)
        edges = list(zip(g.us.tolist(), g.vs.tolist(), g.ws.tolist()))
        dist = floyd_warshall(40, edges)
        d = m.pairwise()
        worst = max(
            dist[i][j] / d[i, j] for i in range(40) for j in range(i + 1, 40)
        )
        assert worst <= 1.2
        got, _ = max_stretch(g, m)
        assert got == pytest.approx(worst, rel=1e-12)

    def test_lightness_between_one_and_complete(self, uniform128):
        pts, m = uniform128
        g = greedy_spanner(pts, m, 1.25)
        w_mst = mst(pts, m).total_weight()
        d = m.pairwise()
        iu = np.triu_indices(pts.n, k=1)
        complete_lightness = math.fsum(d[iu]) / w_mst
        lightness = g.total_weight() / w_mst
        assert 1.0 < lightness < complete_lightness


class TestMst:
    def test_snowflaked_grid_weight(self):
        for n in (17, 65, 257):
            pts = gen_grid(n)
            m = parse_metric("snowflake:l2:0.5", pts)
            tree = mst(pts, m)
            assert tree.total_weight() == float(n - 1)
            assert tree.m == n - 1

    def test_two_points(self):
        pts = PointSet.from_coords([[0.0], [5.0]])
        assert mst(pts, MetricView.lp(pts, 2)).total_weight() == 5.0

    def test_prim_matches_kruskal(self, rng):
        pts = PointSet.from_coords(rng.uniform(0, 10, size=(64, 2)))
        m = MetricView.lp(pts, 2)
        assert mst(pts, m).total_weight() == kruskal_mst_weight(m.pairwise().tolist())

    def test_mst_not_heavier_than_parent_tree(self, theta257_snow):
        # the hierarchy parent links form a spanning tree; the MST can't lose
        pts, m = theta257_snow
        h = build_hierarchy(pts, m)
        d = m.pairwise()
        top = {}
        for i in range(h.ell):
            for p, q in h.parents[i].items():
                if p != q:
                    top.setdefault(p, q)
        parent_weight = math.fsum(d[p, q] for p, q in top.items())
        assert len(top) == pts.n - 1
        assert mst(pts, m).total_weight() <= parent_weight


class TestGraphJson:
    def test_round_trip_with_levels(self, theta17, tmp_path):
        pts, m = theta17
        g = net_tree_spanner(build_hierarchy(pts, m), m, 4.0)
        path = tmp_path / "g.json"
        save_graph(g, path)
        again = load_graph(path)
        assert again.n == g.n and again.m == g.m
        assert np.array_equal(again.us, g.us)
        assert np.array_equal(again.ws, g.ws)
        assert np.array_equal(again.levels, g.levels)

    def test_round_trip_plain(self, uniform128, tmp_path):
        pts, m = uniform128
        g = greedy_spanner(pts, m, 1.5)
        path = tmp_path / "g.json"
        save_graph(g, path)
        again = load_graph(path)
        assert again.levels is None
        assert np.array_equal(again.vs, g.vs)

    def test_rejects_malformed_edges(self):
        with pytest.raises(ValueError, match="u < v"):
            from snowspan.spanners import SpannerGraph

            SpannerGraph(3, [1], [1], [1.0])
