import pytest

from adjunct.finset import FiniteSet


def sized(n: int) -> FiniteSet:
    return FiniteSet(str(i) for i in range(n))


@pytest.fixture
def set_of():
    return sized
