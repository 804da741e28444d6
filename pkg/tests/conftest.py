import random

import pytest

from polyssp.algebra import IntMatrix
from polyssp.groups import FGroup
from polyssp.words import Word

X0_ROWS = [[2, 1], [1, 1]]


@pytest.fixture
def X0():
    return IntMatrix.from_rows(X0_ROWS)


@pytest.fixture
def U():
    return IntMatrix.from_rows([[1, 1], [0, 1]])


@pytest.fixture
def F0(X0):
    return FGroup(X0)


def random_word(rng: random.Random, alphabet, length: int, max_exp: int = 1) -> Word:
    letters = []
    for _ in range(length):
        e = rng.randint(1, max_exp) * rng.choice((1, -1))
        letters.append((rng.randrange(len(alphabet)), e))
    return Word(tuple(letters), alphabet)
