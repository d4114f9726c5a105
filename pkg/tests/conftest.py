from functools import lru_cache

import pytest

from skewhadamard.diffsets import FXParams, build_fx_diffset, paley_diffset
from skewhadamard.finite_field import FieldParams, build_field

TABLE_SETS = (
    (0, 1, 2, 3, 4, 5, 6),
    (0, 1, 2, 3, 4, 6, 12),
    (0, 1, 6, 9, 10, 11, 12),
    (0, 1, 2, 4, 6, 10, 12),
)


@lru_cache(maxsize=None)
def field(p, f):
    return build_field(FieldParams(p, f))


@lru_cache(maxsize=None)
def fx_set(p, index_set):
    return build_fx_diffset(field(p, 3), FXParams(7), index_set)


@lru_cache(maxsize=None)
def paley(p, f=3):
    return paley_diffset(field(p, f))


@pytest.fixture(scope="session")
def f1331():
    return field(11, 3)


@pytest.fixture(scope="session")
def example_set():
    return fx_set(11, (0, 1, 6, 9, 10, 11, 12))
