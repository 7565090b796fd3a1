import numpy as np
import pytest

from ortho import geom

N_SAMPLES = 1000


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_sl2r(rng):
    a, b, c = rng.normal(size=3)
    while abs(a) < 0.2:
        a = rng.normal()
    return geom.MoebiusMap(a, b, c, (1 + b * c) / a)


def random_sl2c(rng):
    a, b, c = (complex(*rng.normal(size=2)) for _ in range(3))
    while abs(a) < 0.2:
        a = complex(*rng.normal(size=2))
    return geom.MoebiusMap(a, b, c, (1 + b * c) / a)


def random_point(rng, dim=2):
    return geom.UhsPoint(rng.normal(size=dim - 1), float(rng.uniform(0.2, 3.0)))


def random_boundary(rng, dim=2):
    return rng.normal(size=dim - 1) * 2
