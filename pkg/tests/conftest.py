import random

import numpy as np
import pytest


@pytest.fixture(autouse=True)
def _seed_everything():
    random.seed(0xC0FFEE)
    np.random.seed(0xC0FFEE)
    yield


@pytest.fixture
def rng():
    return random.Random(0xBADC0DE)
