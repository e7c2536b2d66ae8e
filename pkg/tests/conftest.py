import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from pgrouplab import make_group, span  # noqa: E402


@pytest.fixture
def U():
    return make_group(2, [1, 3])


@pytest.fixture
def S(U):
    return span(U, [U.element((2, 1))])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


SMALL_CORPUS = [
    (2, (1,)), (2, (2,)), (2, (1, 1)), (2, (2, 1)), (2, (3, 1)), (2, (2, 2)), (2, (1, 1, 1)),
    (2, (2, 1, 1)), (3, (1,)), (3, (2,)), (3, (1, 1)), (3, (2, 1)),
]
