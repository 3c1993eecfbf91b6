import pytest

from projcorrect import GF, proj_space


@pytest.fixture(scope="session")
def gf2():
    return GF(2)


@pytest.fixture(scope="session")
def gf3():
    return GF(3)


@pytest.fixture(scope="session")
def gf4():
    return GF(2, 2)


@pytest.fixture(scope="session")
def gf5():
    return GF(5)


@pytest.fixture(scope="session")
def gf7():
    return GF(7)


@pytest.fixture(scope="session")
def gf9():
    return GF(3, 2)


@pytest.fixture(scope="session")
def p4f2(gf2):
    return proj_space(gf2, 4)


@pytest.fixture(scope="session")
def p2f3(gf3):
    return proj_space(gf3, 2)


@pytest.fixture(scope="session")
def p4f3(gf3):
    return proj_space(gf3, 4)
