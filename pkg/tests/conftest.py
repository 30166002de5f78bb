import pytest

from dataset import full_range_dataset, resolve_dataset
from minsearch import SearchParams, trial_rng


@pytest.fixture
def table_a():
    return resolve_dataset("table-a")


@pytest.fixture
def table_b():
    return resolve_dataset("table-b")


@pytest.fixture
def full6():
    return full_range_dataset(6)


@pytest.fixture
def params():
    return SearchParams(seed=42)


@pytest.fixture
def rng():
    return trial_rng(1234, 0)
