import numpy as np
import pytest

from fractalspline import DataSet, IfsParams, build_model, build_partition

# the two reference data sets used by the bundled scenarios
D1_KNOTS = np.array([0.0, 0.4, 0.75, 1.0])
D1_VALUES = np.array([0.1, 1.0, 2.0, 5.0])
D1_DERIVS = np.array([-1.5238, 1.5238, 8.1905, 15.8095])

D2_KNOTS = np.array([1.0, 3.3, 4.6, 7.2])
D2_VALUES = np.array([-1.2, -1.1, -1.0, 4.5])
D2_DERIVS = np.array([0.85, -0.15, -0.4583, -0.7861])


@pytest.fixture
def d1():
    return DataSet(D1_KNOTS, D1_VALUES, D1_DERIVS)


@pytest.fixture
def d2():
    return DataSet(D2_KNOTS, D2_VALUES, D2_DERIVS)


def make_model(data, alphas, u, v, kappa=0.99):
    return build_model(
        data,
        IfsParams(np.asarray(alphas, float), np.asarray(u, float), np.asarray(v, float), kappa),
    )


def random_model(rng, n=None, y_lo=-5.0, y_hi=5.0, v_hi=10.0):
    """Random valid Hermite data plus admissible parameters."""
    n = n or int(rng.integers(3, 7))
    x = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 2.0, n - 1))])
    x += rng.uniform(-3.0, 3.0)
    y = rng.uniform(y_lo, y_hi, n)
    d = rng.uniform(-5.0, 5.0, n)
    data = DataSet(x, y, d)
    a = build_partition(data).a
    alphas = rng.uniform(-0.95, 0.95, n - 1) * 0.99 * a
    u = rng.uniform(0.05, 5.0, n - 1)
    v = rng.uniform(0.0, v_hi, n - 1)
    return build_model(data, IfsParams(alphas, u, v))
