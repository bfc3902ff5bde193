import json
import math

import numpy as np
import pytest

from oracles import brute_force_extremes, brute_force_lp
from snowspan import (
    MetricView,
    PointSet,
    lp_distance,
    parse_metric,
    rescale_to_unit_min,
    snowflake_distance,
    summarize,
)
from snowspan.datasets import gen_grid, gen_uniform
from snowspan.metrics import hierarchy_level_count


class TestLpDistance:
    @pytest.mark.parametrize(
        "p,expected", [(2, 5.0), (math.inf, 4.0), (1, 7.0)]
    )
    def test_three_four_five(self, p, expected):
        assert lp_distance([0.0, 0.0], [3.0, 4.0], p) == expected

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            lp_distance([0.0], [1.0, 2.0], 2)

    def test_p_below_one(self):
        with pytest.raises(ValueError, match="p must be"):
            lp_distance([0.0], [1.0], 0.5)

    def test_matches_brute_force(self, rng):
        for _ in range(50):
            u, v = rng.normal(size=4), rng.normal(size=4)
            for p in (1, 1.5, 2, 3, math.inf):
                assert lp_distance(u, v, p) == pytest.approx(
                    brute_force_lp(u, v, p), rel=1e-12
                )

    def test_norm_monotone_in_p(self, rng):
        # ||x||_p <= ||x||_q whenever p >= q >= 1
        ps = [1, 1.5, 2, 3, 10, math.inf]
        for _ in range(100):
            u, v = rng.normal(size=5), rng.normal(size=5)
            vals = [lp_distance(u, v, p) for p in ps]
            for lo, hi in zip(vals[1:], vals[:-1]):
                assert lo <= hi + 1e-12

    def test_l2_lp_sandwich_high_p(self, rng):
        # for p >= 2: ||x||_p <= ||x||_2 <= d^(1/2 - 1/p) ||x||_p
        d = 6
        for _ in range(100):
            u, v = rng.normal(size=d), rng.normal(size=d)
            n2 = lp_distance(u, v, 2)
            for p in (2, 3, 5, math.inf):
                np_ = lp_distance(u, v, p)
                factor = d ** (0.5 - (0.0 if p == math.inf else 1.0 / p))
                assert np_ <= n2 + 1e-12
                assert n2 <= factor * np_ + 1e-12


class TestSnowflake:
    def test_figure_value(self):
        assert snowflake_distance(16.0, 0.5) == 4.0

    def test_fixed_point(self):
        for alpha in (0.1, 0.5, 0.9):
            assert snowflake_distance(1.0, alpha) == 1.0

    def test_square_root(self):
        assert snowflake_distance(9.0, 0.5) == 3.0

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.2, 1.5])
    def test_alpha_domain(self, alpha):
        with pytest.raises(ValueError):
            snowflake_distance(2.0, alpha)

    def test_monotone_in_base_distance(self, rng):
        for alpha in (0.25, 0.5, 0.75):
            ds = np.sort(rng.uniform(0, 100, size=50))
            out = [snowflake_distance(d, alpha) for d in ds]
            assert all(b >= a for a, b in zip(out, out[1:]))

    def test_preserves_triangle_inequality(self, rng):
        # snowflaking a metric keeps it a metric
        for _ in range(20):
            pts = rng.normal(size=(8, 3))
            base = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
            snow = base**0.61
            for k in range(8):
                assert np.all(snow <= snow[:, k, None] + snow[None, k, :] + 1e-12)

    def test_view_single_exponentiation(self, rng):
        pts = PointSet.from_coords(rng.uniform(1, 9, size=(10, 2)))
        base = MetricView.lp(pts, 2)
        snow = MetricView.snowflake(base, 0.3)
        for i in range(10):
            for j in range(10):
                assert snow.distance(i, j) == base.distance(i, j) ** 0.3
        assert np.array_equal(snow.pairwise(), base.pairwise() ** 0.3)


class TestSummarize:
    def test_theta17_snowflaked(self, theta17):
        pts, m = theta17
        s = summarize(pts, m)
        assert s.diameter == 4.0
        assert s.ell == 2
        assert s.min_distance == 1.0

    def test_single_point(self):
        pts = PointSet.from_coords([[3.0, 1.0]])
        s = summarize(pts, MetricView.lp(pts, 2))
        assert s.diameter == 0.0 and s.ell == 0

    def test_uniform_matches_brute_force(self, rng):
        coords = rng.uniform(0, 32, size=(64, 2))
        pts = PointSet.from_coords(coords)
        s = summarize(pts, MetricView.lp(pts, 2))
        dmax, dmin = brute_force_extremes(
            coords.tolist(), lambda a, b: brute_force_lp(a, b, 2)
        )
        assert s.diameter == pytest.approx(dmax, rel=1e-12)
        assert s.min_distance == pytest.approx(dmin, rel=1e-12)

    def test_pairwise_consistent_with_single(self, rng):
        # exact agreement for the exactly-rounded norms; general p may differ
        # by an ulp between vectorized and scalar pow, within 1e-12 relative
        pts = PointSet.from_coords(rng.normal(size=(20, 3)))
        for p in (1, 2, math.inf):
            view = MetricView.lp(pts, p)
            mat = view.pairwise()
            for i in range(0, 20, 3):
                for j in range(0, 20, 7):
                    assert mat[i, j] == view.distance(i, j)
        view = MetricView.lp(pts, 2.5)
        mat = view.pairwise()
        for i in range(20):
            for j in range(20):
                if i != j:
                    assert mat[i, j] == pytest.approx(view.distance(i, j), rel=1e-12)


class TestRescale:
    def test_grid_spacing_three(self):
        pts = PointSet.from_coords(3.0 * np.arange(1, 6)[:, None])
        out = rescale_to_unit_min(pts, MetricView.lp(pts, 2))
        assert np.array_equal(out.coords[:, 0], np.arange(1, 6, dtype=float))

    def test_unit_grid_unchanged(self):
        pts = gen_grid(9)
        out = rescale_to_unit_min(pts, MetricView.lp(pts, 2))
        assert np.array_equal(out.coords, pts.coords)

    def test_random_cloud_hits_unit_min(self, rng):
        pts = PointSet.from_coords(rng.uniform(0, 50, size=(80, 3)))
        out = rescale_to_unit_min(pts, MetricView.lp(pts, 2))
        s = summarize(out, MetricView.lp(out, 2))
        assert abs(s.min_distance - 1.0) <= 1e-12

    def test_snowflake_view_rescales_base(self, rng):
        pts = PointSet.from_coords(rng.uniform(0, 50, size=(40, 2)))
        view = parse_metric("snowflake:l2:0.5", pts)
        out = rescale_to_unit_min(pts, view)
        s = summarize(out, parse_metric("snowflake:l2:0.5", out))
        assert abs(s.min_distance - 1.0) <= 1e-12

    def test_duplicates_identified(self):
        pts = PointSet.from_coords([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="0 and 2"):
            rescale_to_unit_min(pts, MetricView.lp(pts, 2))

    def test_matrix_entries_divided(self):
        m = np.array([[0.0, 2.0, 4.0], [2.0, 0.0, 2.0], [4.0, 2.0, 0.0]])
        pts = PointSet.from_matrix(m)
        out = rescale_to_unit_min(pts, MetricView.matrix(pts))
        assert out.matrix[0, 1] == 1.0 and out.matrix[0, 2] == 2.0


class TestMatrixValidation:
    def test_triangle_violation_rejected(self):
        m = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
        with pytest.raises(ValueError, match="triangle"):
            PointSet.from_matrix(m)

    def test_asymmetry_rejected(self):
        m = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValueError, match="symmetric"):
            PointSet.from_matrix(m)

    def test_nonzero_diagonal_rejected(self):
        m = np.array([[1.0, 1.0], [1.0, 0.0]])
        with pytest.raises(ValueError, match="diagonal"):
            PointSet.from_matrix(m)

    def test_valid_matrix_accepted(self):
        m = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.5], [2.0, 1.5, 0.0]])
        pts = PointSet.from_matrix(m)
        view = MetricView.matrix(pts)
        assert view.distance(0, 2) == 2.0


class TestSpecStrings:
    @pytest.mark.parametrize(
        "spec", ["l1", "l2", "linf", "lp:3", "snowflake:l2:0.5", "snowflake:lp:3:0.25"]
    )
    def test_round_trip(self, spec, rng):
        pts = PointSet.from_coords(rng.uniform(1, 5, size=(6, 2)))
        view = parse_metric(spec, pts)
        again = parse_metric(view.spec, pts)
        assert np.array_equal(view.pairwise(), again.pairwise())

    def test_unknown_spec(self):
        pts = gen_grid(3)
        with pytest.raises(ValueError, match="unknown metric"):
            parse_metric("chebyshev", pts)

    def test_point_file_round_trip(self, tmp_path, rng):
        pts = PointSet.from_coords(rng.normal(size=(12, 3)))
        path = tmp_path / "pts.json"
        pts.save(path)
        data = json.loads(path.read_text())
        assert data["dim"] == 3 and len(data["coords"]) == 12
        again = PointSet.load(path)
        assert np.array_equal(again.coords, pts.coords)

    def test_matrix_point_file_round_trip(self, tmp_path):
        m = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.5], [2.0, 1.5, 0.0]])
        pts = PointSet.from_matrix(m)
        path = tmp_path / "pts.json"
        pts.save(path)
        again = PointSet.load(path)
        assert np.array_equal(again.matrix, m)
        view = parse_metric("snowflake:matrix:0.5", again)
        assert view.distance(0, 2) == 2.0**0.5


class TestLevelCount:
    def test_matches_summary_generically(self, theta17):
        pts, m = theta17
        s = summarize(pts, m)
        assert hierarchy_level_count(pts.n, s.diameter) == s.ell == 2

    def test_floors_at_one_for_tiny_diameter(self):
        assert hierarchy_level_count(2, 1.0) == 1
        assert hierarchy_level_count(1, 0.0) == 0
