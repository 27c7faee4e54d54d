import random
from pathlib import Path

import pytest

from lipsat.instances import CAMPILLO_GAP, CAMPILLO_STEP, KEY_EXAMPLE

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def key_example():
    return KEY_EXAMPLE


@pytest.fixture
def campillo_gap():
    return CAMPILLO_GAP


@pytest.fixture
def campillo_step():
    return CAMPILLO_STEP


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def data_dir():
    return DATA
