import numpy as np
import pytest

from sphavg.funcspace import SmoothFunction


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def constant_one(d):
    return SmoothFunction(d, lambda p: np.ones(p.shape[0]))


@pytest.fixture
def one2():
    return constant_one(2)
