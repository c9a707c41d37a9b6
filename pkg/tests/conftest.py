import random

import pytest

from corpus import make_corpus, random_query


@pytest.fixture(scope="session")
def corpus200():
    """200 seeded OLON-free probabilistic programs with paired queries."""
    programs = make_corpus(seed=20240, count=200)
    rng = random.Random(4711)
    return [(p, random_query(rng, p)) for p in programs]
