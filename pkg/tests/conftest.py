import numpy as np
import pytest

from rieszmix.verify import random_canonical, random_lower, random_spd


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def raw_leading_minors(x):
    x = np.asarray(x, dtype=float)
    return np.array([np.linalg.det(x[:k, :k]) for k in range(1, x.shape[0] + 1)])


def raw_trailing_minors(x):
    x = np.asarray(x, dtype=float)
    r = x.shape[0]
    return np.array([np.linalg.det(x[r - k:, r - k:]) for k in range(1, r + 1)])


def rel_err(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.linalg.norm(a - b) / np.linalg.norm(b)


__all__ = ["random_spd", "random_lower", "random_canonical"]
