import pytest

from prefal.corpus import load_corpus, square_free_keys
from prefal.dsl import parse_word

FIB = "morphic(0->01,1->0;0)"
TRIB = "morphic(1->12,2->13,3->1;1)"
TM = "morphic(0->01,1->10;0)"
F_OF_TM = f"image(0->01,1->0;{TM})"
TEN_F = f"concat(10;{FIB})"
ZERO_F = f"concat(0;{FIB})"


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def keys(corpus):
    return square_free_keys(corpus)


@pytest.fixture
def fib():
    return parse_word(FIB)


@pytest.fixture
def trib():
    return parse_word(TRIB)


@pytest.fixture
def tm():
    return parse_word(TM)
