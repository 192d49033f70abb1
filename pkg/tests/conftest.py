import random
from importlib import resources

import pytest

import helpers


def bundled_path(name: str) -> str:
    return str(resources.files("mata").joinpath(f"data/{name}.txt"))


BUNDLED = ("r1a_gen", "r3a_gen", "r6a_gen", "r8a_gen")


@pytest.fixture(scope="session")
def toy():
    return helpers.toy_instance()


@pytest.fixture(scope="session")
def r1a():
    from mata import load_instance

    return load_instance(bundled_path("r1a_gen"))


@pytest.fixture(scope="session")
def r1a_adj(r1a):
    from mata import tighten_time_windows

    return tighten_time_windows(r1a)


@pytest.fixture(scope="session")
def bundled_adjusted():
    from mata import load_instance, tighten_time_windows

    return {
        name: tighten_time_windows(load_instance(bundled_path(name)))
        for name in BUNDLED
    }


@pytest.fixture()
def rng():
    return random.Random(0xC0FFEE)
