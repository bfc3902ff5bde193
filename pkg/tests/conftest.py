import numpy as np
import pytest

from snowspan import MetricView, PointSet, parse_metric
from snowspan.datasets import gen_grid, gen_uniform


@pytest.fixture(scope="session")
def theta17():
    pts = gen_grid(17)
    return pts, parse_metric("snowflake:l2:0.5", pts)


@pytest.fixture(scope="session")
def theta257_snow():
    pts = gen_grid(257)
    return pts, parse_metric("snowflake:l2:0.5", pts)


@pytest.fixture(scope="session")
def uniform128():
    pts = gen_uniform(128, 2, seed=7)
    return pts, MetricView.lp(pts, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
