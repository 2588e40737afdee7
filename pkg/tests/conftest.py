import random

import pytest

from obslat import corpus


@pytest.fixture(scope="session")
def lattices():
    return corpus.standard_lattices()


@pytest.fixture()
def rng():
    return random.Random(0)


def pytest_make_parametrize_id(config, val, argname):
    if isinstance(val, str):
        return val
    return None
