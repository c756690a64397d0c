from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from opetopic.unnamed import corpus, generate_random

CORPUS = Path(__file__).resolve().parents[1] / "src" / "opetopic" / "corpus"

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@lru_cache(maxsize=None)
def generated(count: int = 300, max_dim: int = 4, size: int = 8, seed: int = 7) -> tuple:
    return tuple(corpus(count, max_dim, size, seed))


def opetopes(min_dim: int = 0, max_dim: int = 4, max_size: int = 8):
    """Hypothesis strategy for derivable preopetopes, driven by a seed."""
    return st.builds(generate_random, st.integers(min_dim, max_dim),
                     st.integers(1, max_size), st.integers(0, 2**31 - 1))


@pytest.fixture(scope="session")
def gen_corpus():
    return generated()


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS
