import random
from fractions import Fraction

import pytest

from tsirnorm import FiniteVector


def random_vector(rng: random.Random, max_support: int = 6, max_index: int = 14,
                  max_pq: int = 8) -> FiniteVector:
    size = rng.randint(1, max_support)
    indices = rng.sample(range(1, max_index + 1), size)
    entries = {
        i: Fraction(rng.randint(1, max_pq) * rng.choice([-1, 1]), rng.randint(1, max_pq))
        for i in indices
    }
    return FiniteVector.from_entries(entries)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
