import numpy as np
import pytest


def dense_difference_matrix(n1, n2):
    """Build the stacked 2N x N difference matrix from the circulant
    first-row definitions (independent of the matrix-free implementation)."""
    n = n1 * n2
    first_v = np.zeros(n)
    first_v[0] = -1.0
    first_v[n - 1] = 1.0
    first_h = np.zeros(n)
    first_h[0] = -1.0
    first_h[n - n1] = 1.0

    def circulant(first_row):
        return np.array([np.roll(first_row, i) for i in range(n)])

    return np.vstack([circulant(first_v), circulant(first_h)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
